#include <doctest.h>

#include "meshgate/contract.hpp"
#include "meshgate/enforcement.hpp"
#include "meshgate/pii.hpp"

#include "test_support.hpp"

#include <random>
#include <string>
#include <vector>

using namespace meshgate;

namespace {

// Independent mod-10 check: parity by position from the right instead of a
// toggling flag, so a shared bug is unlikely.
bool reference_luhn(const std::string& digits)
{
    if (digits.size() < 2) return false;
    int sum = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        char c = digits[k];
        if (c < '0' || c > '9') return false;
        int d = c - '0';
        if ((digits.size() - 1 - k) % 2 == 1) {
            d *= 2;
            if (d > 9) d -= 9;
        }
        sum += d;
    }
    return sum % 10 == 0;
}

std::string random_digits(std::mt19937& rng, int len)
{
    std::string out;
    for (int i = 0; i < len; ++i) {
        out.push_back(static_cast<char>('0' + testsupport::pick_int(rng, 0, 9)));
    }
    return out;
}

// Appends the check digit that makes the whole string pass the mod-10 test.
std::string with_check_digit(const std::string& body)
{
    for (char c = '0'; c <= '9'; ++c) {
        std::string candidate = body + c;
        if (reference_luhn(candidate)) return candidate;
    }
    return body + "0"; // unreachable
}

DatasetSample single_cell(const std::string& column, const std::string& value)
{
    DatasetSample s;
    s.dataset_name = "t.t";
    Row row;
    row.emplace(column, Cell{value});
    s.rows.push_back(std::move(row));
    return s;
}

std::vector<PiiDetector> detectors_for(const std::string& value)
{
    auto found = profile_pii(single_cell("c", value));
    std::vector<PiiDetector> out;
    for (const auto& f : found.findings) out.push_back(f.detector);
    return out;
}

} // namespace

TEST_CASE("luhn checksum agrees with an independent implementation")
{
    CHECK(luhn_valid("79927398713"));
    CHECK_FALSE(luhn_valid("79927398710"));
    CHECK(luhn_valid("4111111111111111"));
    CHECK(luhn_valid("4222222222222"));

    CHECK_FALSE(luhn_valid(""));
    CHECK_FALSE(luhn_valid("5")); // single digits are below the length floor
    CHECK(luhn_valid("18"));      // 1*2 + 8 = 10
    CHECK(luhn_valid("26"));      // 2*2 + 6 = 10
    CHECK_FALSE(luhn_valid("19"));
    CHECK_FALSE(luhn_valid("4111a11111111111"));
    CHECK_FALSE(luhn_valid("4111 1111 1111 1111")); // separators not allowed here

    std::mt19937 rng(20260815);
    for (int i = 0; i < 10000; ++i) {
        std::string digits = random_digits(rng, testsupport::pick_int(rng, 2, 19));
        CHECK(luhn_valid(digits) == reference_luhn(digits));
    }
    for (int i = 0; i < 200; ++i) {
        std::string body = random_digits(rng, testsupport::pick_int(rng, 12, 18));
        CHECK(luhn_valid(with_check_digit(body)));
    }
}

TEST_CASE("card test allows digit groups joined by spaces or dashes")
{
    CHECK(is_card_number("4111111111111111"));
    CHECK(is_card_number("4111 1111 1111 1111"));
    CHECK(is_card_number("4111-1111-1111-1111"));
    CHECK(is_card_number("4222222222222"));                 // 13 digits
    CHECK(is_card_number(with_check_digit(std::string(18, '1')))); // 19 digits

    CHECK_FALSE(is_card_number("4111.1111.1111.1111")); // wrong separator
    CHECK_FALSE(is_card_number("+4111111111111111"));
    CHECK_FALSE(is_card_number("411111111111"));  // 12 digits
    CHECK_FALSE(is_card_number(with_check_digit(std::string(19, '1')))); // 20 digits
    CHECK_FALSE(is_card_number("4111111111111112")); // checksum off by one
    CHECK_FALSE(is_card_number("card 4111111111111111"));
    CHECK_FALSE(is_card_number(""));
}

TEST_CASE("excerpts are redacted to four characters")
{
    CHECK(redact_excerpt("4111 1111 1111 1111") == "4111***");
    CHECK(redact_excerpt("abcd") == "abcd***");
    CHECK(redact_excerpt("ab") == "ab***");
    CHECK(redact_excerpt("") == "***");
}

TEST_CASE("each detector maps to a fixed classification")
{
    CHECK(detector_class(PiiDetector::Email) == PiiClass::DirectIdentifier);
    CHECK(detector_class(PiiDetector::Phone) == PiiClass::DirectIdentifier);
    CHECK(detector_class(PiiDetector::NationalIdLike) == PiiClass::DirectIdentifier);
    CHECK(detector_class(PiiDetector::CreditCard) == PiiClass::Financial);
    CHECK(detector_class(PiiDetector::AddressLike) == PiiClass::QuasiIdentifier);
    CHECK(detector_class(PiiDetector::NameLike) == PiiClass::QuasiIdentifier);
}

TEST_CASE("detector and action names are stable")
{
    CHECK(to_string(PiiDetector::Email) == "email");
    CHECK(to_string(PiiDetector::Phone) == "phone");
    CHECK(to_string(PiiDetector::CreditCard) == "credit_card");
    CHECK(to_string(PiiDetector::NationalIdLike) == "national_id_like");
    CHECK(to_string(PiiDetector::AddressLike) == "address_like");
    CHECK(to_string(PiiDetector::NameLike) == "name_like");
    CHECK(to_string(PiiAction::ApplyClassification) == "apply_classification");
    CHECK(to_string(PiiAction::RecommendMasking) == "recommend_masking");
    CHECK(to_string(PiiAction::NotifySecurity) == "notify_security");
}

TEST_CASE("digit runs separate phones from cards")
{
    using D = PiiDetector;

    // 16 digits: too long for a phone, Luhn-valid card
    CHECK(detectors_for("4111 1111 1111 1111") == std::vector<D>{D::CreditCard});
    // a leading plus marks a dialed number, never a card
    CHECK(detectors_for("+4111 1111 1111 1111").empty());
    CHECK(detectors_for("+4155550142999") == std::vector<D>{D::Phone});
    // 10-15 digits read as phone; non-Luhn keeps the card detector quiet
    CHECK(detectors_for("415 555 0142") == std::vector<D>{D::Phone});
    // parens are phone separators but disqualify a card
    CHECK(detectors_for("(4111) 1111 1111 1111").empty()); // 16 digits, no phone
    // 13 digits, Luhn-valid, dash separated: both detectors fire
    std::string both = "4222-2222-2222-2"; // 4222222222222 regrouped
    CHECK(detectors_for(both) == std::vector<D>{D::Phone, D::CreditCard});
    // short runs stay quiet
    CHECK(detectors_for("ref 12345").empty());
    CHECK(detectors_for("room 4-11").empty());
    // a detached plus is skipped; the digits after it still read as a phone
    CHECK(detectors_for("+ 4155550142") == std::vector<D>{D::Phone});
}

TEST_CASE("trailing punctuation is trimmed from a run's excerpt")
{
    auto found = profile_pii(single_cell("c", "call +1 (415) 555-0142."));
    REQUIRE(found.findings.size() == 1);
    CHECK(found.findings[0].detector == PiiDetector::Phone);
    CHECK(found.findings[0].excerpt == "+1 (***");
}

TEST_CASE("name heuristic wants capitalized known names")
{
    using D = PiiDetector;
    CHECK(detectors_for("Alice Smith") == std::vector<D>{D::NameLike});
    CHECK(detectors_for("Alice Xyz") == std::vector<D>{D::NameLike});
    CHECK(detectors_for("Xyz Garcia") == std::vector<D>{D::NameLike});
    CHECK(detectors_for("Anna Maria Garcia") == std::vector<D>{D::NameLike});
    CHECK(detectors_for("alice smith").empty());
    CHECK(detectors_for("Alice").empty());
    CHECK(detectors_for("Xyz Abc").empty());
    CHECK(detectors_for("Alice Smith9").empty());
    CHECK(detectors_for("One Two Three Four Garcia").empty()); // 5 tokens
}

TEST_CASE("address heuristic wants a house number and a street suffix")
{
    using D = PiiDetector;
    CHECK(detectors_for("42 Oak Street") == std::vector<D>{D::AddressLike});
    CHECK(detectors_for("42 Oak St.") == std::vector<D>{D::AddressLike});
    CHECK(detectors_for("9 Main Plaza") == std::vector<D>{D::AddressLike});
    CHECK(detectors_for("42 Oak").empty());            // no suffix token
    CHECK(detectors_for("Oak Street 42").empty());     // number must lead
    CHECK(detectors_for("123456 Oak Street").empty()); // number too long
    CHECK(detectors_for("42a Oak Street").empty());
}

TEST_CASE("emails are matched anywhere in the cell")
{
    using D = PiiDetector;
    CHECK(detectors_for("maria@example.org") == std::vector<D>{D::Email});
    CHECK(detectors_for("reach me at a.b+c@mail.example.co today") ==
          std::vector<D>{D::Email});
    CHECK(detectors_for("a@b").empty());
    CHECK(detectors_for("no-reply at example").empty());

    auto two = profile_pii(single_cell("c", "a@x.example or b@y.example"));
    REQUIRE(two.findings.size() == 2);
    CHECK(two.findings[0].excerpt == "a@x.***");
    CHECK(two.findings[1].excerpt == "b@y.***");
}

TEST_CASE("custom national-id patterns extend the scan")
{
    PiiOptions options;
    options.national_id_patterns.push_back(R"([A-Z]{2}\d{6})");
    auto found = profile_pii(single_cell("c", "permit AB123456 on file"), options);
    REQUIRE(found.findings.size() == 1);
    CHECK(found.findings[0].detector == PiiDetector::NationalIdLike);
    CHECK(found.findings[0].excerpt == "AB12***");

    auto default_hit = profile_pii(single_cell("c", "ssn 123-45-6789"));
    REQUIRE(default_hit.findings.size() == 1);
    CHECK(default_hit.findings[0].detector == PiiDetector::NationalIdLike);
}

TEST_CASE("non-string cells are never scanned")
{
    DatasetSample s;
    s.dataset_name = "t.t";
    Row row;
    row.emplace("a", Cell{std::int64_t{4111111111111111}});
    row.emplace("b", Cell{true});
    row.emplace("c", Cell{std::monostate{}});
    row.emplace("d", Cell{4111111111111111.0});
    s.rows.push_back(std::move(row));
    auto found = profile_pii(s);
    CHECK(found.findings.empty());
    CHECK(found.routing.empty());
}

TEST_CASE("routing escalates with the strongest classification")
{
    auto quasi_only = profile_pii(single_cell("c", "Alice Smith"));
    CHECK(quasi_only.routing == std::vector<PiiAction>{PiiAction::NotifySecurity});

    auto direct = profile_pii(single_cell("c", "maria@example.org"));
    CHECK(direct.routing == std::vector<PiiAction>{PiiAction::RecommendMasking,
                                                   PiiAction::NotifySecurity});

    auto clean = profile_pii(single_cell("c", "nothing to see"));
    CHECK(clean.findings.empty());
    CHECK(clean.routing.empty());
}

TEST_CASE("profiling the customer fixture finds every planted marker")
{
    auto text = testsupport::read_text(testsupport::fixtures_dir() / "data" /
                                       "customers_pii.ndjson");
    auto sample = load_sample(text, "customers_pii.ndjson");
    auto found = profile_pii(sample);

    using D = PiiDetector;
    const std::vector<PiiFinding> expected = {
        {"contact_name", 0, D::NameLike, "Alic***"},
        {"email", 0, D::Email, "mari***"},
        {"payment_card", 0, D::CreditCard, "4111***"},
        {"phone", 0, D::Phone, "+49 ***"},
        {"shipping_address", 0, D::AddressLike, "42 O***"},
        {"tax_ref", 1, D::NationalIdLike, "123-***"},
        {"contact_name", 2, D::NameLike, "Mari***"},
        {"email", 2, D::Email, "joe.***"},
        {"payment_card", 2, D::CreditCard, "5500***"},
        {"phone", 2, D::Phone, "0049***"},
        {"shipping_address", 2, D::AddressLike, "1600***"},
        {"contact_name", 3, D::NameLike, "Bob ***"},
        {"payment_card", 3, D::CreditCard, "4012***"},
        {"phone", 3, D::Phone, "+1 (***"},
        {"shipping_address", 3, D::AddressLike, "7 Bi***"},
    };
    CHECK(found.findings == expected);

    const std::map<std::string, PiiClass> classes = {
        {"contact_name", PiiClass::QuasiIdentifier},
        {"email", PiiClass::DirectIdentifier},
        {"payment_card", PiiClass::Financial},
        {"phone", PiiClass::DirectIdentifier},
        {"shipping_address", PiiClass::QuasiIdentifier},
        {"tax_ref", PiiClass::DirectIdentifier},
    };
    CHECK(found.proposed_classifications == classes);
    CHECK(found.routing == std::vector<PiiAction>{PiiAction::RecommendMasking,
                                                  PiiAction::NotifySecurity});

    auto again = profile_pii(sample);
    CHECK(again.findings == found.findings);
}

TEST_CASE("the strongest class wins when detectors disagree on a column")
{
    DatasetSample s;
    s.dataset_name = "t.t";
    Row r1, r2;
    r1.emplace("c", Cell{std::string("Alice Smith")});       // quasi
    r2.emplace("c", Cell{std::string("maria@example.org")}); // direct
    s.rows.push_back(std::move(r1));
    s.rows.push_back(std::move(r2));
    auto found = profile_pii(s);
    CHECK(found.proposed_classifications.at("c") == PiiClass::DirectIdentifier);

    DatasetSample t;
    t.dataset_name = "t.t";
    Row r3, r4;
    r3.emplace("c", Cell{std::string("4111 1111 1111 1111")}); // financial
    r4.emplace("c", Cell{std::string("maria@example.org")});
    t.rows.push_back(std::move(r3));
    t.rows.push_back(std::move(r4));
    auto strongest = profile_pii(t);
    CHECK(strongest.proposed_classifications.at("c") == PiiClass::Financial);
}

namespace {

DataContract customer_contract()
{
    DataContract c;
    c.dataset_name = "crm.customers";
    c.version = {1, 0, 0};
    c.status = LifecycleState::Approved;
    c.owner = {"crm", "crm@example.com"};
    for (const char* name : {"contact_name", "customer_id", "email", "payment_card",
                             "phone", "shipping_address", "tax_ref"}) {
        FieldSpec f;
        f.name = name;
        f.type = std::string(name) == "customer_id" ? LogicalType::Integer
                                                    : LogicalType::String;
        f.description = "fixture column";
        c.schema.push_back(std::move(f));
    }
    return c;
}

} // namespace

TEST_CASE("classification folds findings into a fresh draft")
{
    auto text = testsupport::read_text(testsupport::fixtures_dir() / "data" /
                                       "customers_pii.ndjson");
    auto found = profile_pii(load_sample(text, "customers_pii.ndjson"));

    DataContract before = customer_contract();
    auto [amended, routing] = apply_classification(before, found);

    CHECK(amended.status == LifecycleState::Draft);
    CHECK(routing.front() == PiiAction::ApplyClassification);
    CHECK(routing == std::vector<PiiAction>{PiiAction::ApplyClassification,
                                            PiiAction::RecommendMasking,
                                            PiiAction::NotifySecurity});

    CHECK(amended.find_field("email")->pii_class == PiiClass::DirectIdentifier);
    CHECK(amended.find_field("payment_card")->pii_class == PiiClass::Financial);
    CHECK(amended.find_field("contact_name")->pii_class == PiiClass::QuasiIdentifier);
    CHECK_FALSE(amended.find_field("customer_id")->pii_class.has_value());

    // appended in column order, since proposals iterate alphabetically
    CHECK(amended.compliance.pii_fields ==
          std::vector<std::string>{"contact_name", "email", "payment_card", "phone",
                                   "shipping_address", "tax_ref"});

    // everything outside compliance and pii markers is untouched
    CHECK(amended.dataset_name == before.dataset_name);
    CHECK(amended.version == before.version);
    CHECK(amended.owner == before.owner);
    CHECK(amended.sla == before.sla);
}

TEST_CASE("existing classifications are never overwritten")
{
    auto found = profile_pii(single_cell("email", "maria@example.org"));

    DataContract c = customer_contract();
    for (FieldSpec& f : c.schema) {
        if (f.name == "email") f.pii_class = PiiClass::QuasiIdentifier;
    }

    auto [amended, routing] = apply_classification(c, found);
    // the weaker hand-set class stays, but the listing is still added
    CHECK(amended.find_field("email")->pii_class == PiiClass::QuasiIdentifier);
    CHECK(amended.compliance.pii_fields == std::vector<std::string>{"email"});
    CHECK(amended.status == LifecycleState::Draft);
    CHECK(routing.front() == PiiAction::ApplyClassification);
}

TEST_CASE("a fully classified contract passes through unchanged")
{
    auto found = profile_pii(single_cell("email", "maria@example.org"));

    DataContract c = customer_contract();
    for (FieldSpec& f : c.schema) {
        if (f.name == "email") f.pii_class = PiiClass::DirectIdentifier;
    }
    c.compliance.pii_fields = {"email"};

    auto [amended, routing] = apply_classification(c, found);
    CHECK(amended == c);
    CHECK(amended.status == LifecycleState::Approved);
    CHECK(routing == found.routing); // no apply_classification entry
}

TEST_CASE("findings for unknown columns are report-only")
{
    auto found = profile_pii(single_cell("surprise", "maria@example.org"));

    DataContract c = customer_contract();
    auto [amended, routing] = apply_classification(c, found);
    CHECK(amended == c);
    CHECK(routing == found.routing);
    CHECK(amended.compliance.pii_fields.empty());
}
