// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/pii.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>

namespace meshgate {

std::string_view to_string(PiiDetector d)
{
    switch (d) {
    case PiiDetector::Email: return "email";
    case PiiDetector::Phone: return "phone";
    case PiiDetector::CreditCard: return "credit_card";
    case PiiDetector::NationalIdLike: return "national_id_like";
    case PiiDetector::AddressLike: return "address_like";
    case PiiDetector::NameLike: return "name_like";
    }
    return "?";
}

std::string_view to_string(PiiAction a)
{
    switch (a) {
    case PiiAction::ApplyClassification: return "apply_classification";
    case PiiAction::RecommendMasking: return "recommend_masking";
    case PiiAction::NotifySecurity: return "notify_security";
    }
    return "?";
}

PiiClass detector_class(PiiDetector d)
{
    switch (d) {
    case PiiDetector::CreditCard: return PiiClass::Financial;
    case PiiDetector::Email:
    case PiiDetector::Phone:
    case PiiDetector::NationalIdLike: return PiiClass::DirectIdentifier;
    case PiiDetector::AddressLike:
    case PiiDetector::NameLike: return PiiClass::QuasiIdentifier;
    }
    return PiiClass::None;
}

bool luhn_valid(std::string_view digits)
{
    if (digits.size() < 2) return false;
    int sum = 0;
    bool doubled = false;
    for (std::size_t i = digits.size(); i-- > 0;) {
        char c = digits[i];
        if (c < '0' || c > '9') return false;
        int d = c - '0';
        if (doubled) {
            d *= 2;
            if (d > 9) d -= 9;
        }
        sum += d;
        doubled = !doubled;
    }
    return sum % 10 == 0;
}

bool is_card_number(std::string_view text)
{
    std::string digits;
    for (char c : text) {
        if (c >= '0' && c <= '9') digits.push_back(c);
        else if (c != ' ' && c != '-') return false;
    }
    if (digits.size() < 13 || digits.size() > 19) return false;
    return luhn_valid(digits);
}

std::string redact_excerpt(std::string_view match)
{
    return std::string(match.substr(0, 4)) + "***";
}

namespace {

const std::regex& email_regex()
{
    static const std::regex re(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})");
    return re;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct DigitRun {
    std::size_t begin = 0;
    std::size_t end = 0; // past the last character
    std::string digits;
    bool card_separators_only = true; // space/dash
    bool has_plus = false;
};

// Maximal substrings of digits plus separator characters, trimmed to start
// and end on a digit (an optional single leading '+' is kept as a flag).
std::vector<DigitRun> digit_runs(const std::string& text)
{
    auto is_sep = [](char c) {
        return c == ' ' || c == '-' || c == '.' || c == '(' || c == ')';
    };
    std::vector<DigitRun> runs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i]) && text[i] != '+') {
            ++i;
            continue;
        }
        bool plus = text[i] == '+';
        std::size_t start = i;
        std::size_t j = plus ? i + 1 : i;
        if (plus && (j >= text.size() || !is_digit(text[j]))) {
            ++i;
            continue;
        }
        DigitRun run;
        run.has_plus = plus;
        std::size_t last_digit = j;
        while (j < text.size() && (is_digit(text[j]) || is_sep(text[j]))) {
            if (is_digit(text[j])) last_digit = j;
            ++j;
        }
        run.begin = start;
        run.end = last_digit + 1;
        // Separators are only disqualifying when they sit between digits;
        // trailing punctuation has already been trimmed off the span.
        for (std::size_t k = plus ? start + 1 : start; k < run.end; ++k) {
            if (is_digit(text[k])) {
                run.digits.push_back(text[k]);
            } else if (text[k] != ' ' && text[k] != '-') {
                run.card_separators_only = false;
            }
        }
        runs.push_back(std::move(run));
        i = j;
    }
    return runs;
}

const std::set<std::string>& first_names()
{
    static const std::set<std::string> names = {
        "alice", "bob",    "carol",  "david", "emma",   "frank", "grace",
        "henry", "isabel", "james",  "karen", "liam",   "maria", "nathan",
        "olivia", "peter", "rachel", "samuel", "sofia", "thomas",
    };
    return names;
}

const std::set<std::string>& surnames()
{
    static const std::set<std::string> names = {
        "smith",  "johnson", "williams", "brown",    "jones",
        "garcia", "miller",  "davis",    "martinez", "wilson",
    };
    return names;
}

const std::set<std::string>& street_suffixes()
{
    static const std::set<std::string> suffixes = {
        "street", "st",   "avenue", "ave",  "road",  "rd",    "boulevard",
        "blvd",   "lane", "ln",     "drive", "dr",   "way",   "court",
        "ct",     "place", "plaza", "square", "terrace",
    };
    return suffixes;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> space_tokens(const std::string& s)
{
    std::vector<std::string> tokens;
    std::string current;
    for (char c : s) {
        if (c == ' ') {
            if (!current.empty()) tokens.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

bool capitalized_word(const std::string& token)
{
    if (token.empty() || !std::isupper(static_cast<unsigned char>(token[0]))) {
        return false;
    }
    return std::all_of(token.begin(), token.end(), [](char c) {
        return std::isalpha(static_cast<unsigned char>(c));
    });
}

bool looks_like_name(const std::string& cell)
{
    auto tokens = space_tokens(cell);
    if (tokens.size() < 2 || tokens.size() > 4) return false;
    if (!std::all_of(tokens.begin(), tokens.end(), capitalized_word)) return false;
    return first_names().count(lower(tokens.front())) > 0 ||
           surnames().count(lower(tokens.back())) > 0;
}

bool looks_like_address(const std::string& cell)
{
    auto tokens = space_tokens(cell);
    if (tokens.size() < 3) return false;
    const std::string& first = tokens.front();
    if (first.empty() || first.size() > 5 ||
        !std::all_of(first.begin(), first.end(), is_digit)) {
        return false;
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string t = lower(tokens[i]);
        while (!t.empty() && (t.back() == '.' || t.back() == ',')) t.pop_back();
        if (street_suffixes().count(t)) return true;
    }
    return false;
}

void scan_cell(const std::string& cell, const std::string& column, std::size_t row,
               const std::vector<std::regex>& national_id, PiiFindings& out)
{
    struct Match {
        std::size_t pos;
        PiiDetector detector;
        std::string excerpt;
    };
    std::vector<Match> matches;

    for (auto it = std::sregex_iterator(cell.begin(), cell.end(), email_regex());
         it != std::sregex_iterator(); ++it) {
        matches.push_back({static_cast<std::size_t>(it->position()),
                           PiiDetector::Email, redact_excerpt(it->str())});
    }

    for (const DigitRun& run : digit_runs(cell)) {
        const std::string_view span(cell.data() + run.begin, run.end - run.begin);
        const std::size_t n = run.digits.size();
        if (n >= 10 && n <= 15) {
            matches.push_back({run.begin, PiiDetector::Phone, redact_excerpt(span)});
        }
        if (n >= 13 && n <= 19 && run.card_separators_only && !run.has_plus &&
            luhn_valid(run.digits)) {
            matches.push_back(
                {run.begin, PiiDetector::CreditCard, redact_excerpt(span)});
        }
    }

    for (const std::regex& re : national_id) {
        for (auto it = std::sregex_iterator(cell.begin(), cell.end(), re);
             it != std::sregex_iterator(); ++it) {
            matches.push_back({static_cast<std::size_t>(it->position()),
                               PiiDetector::NationalIdLike,
                               redact_excerpt(it->str())});
        }
    }

    if (looks_like_address(cell)) {
        matches.push_back({0, PiiDetector::AddressLike, redact_excerpt(cell)});
    }
    if (looks_like_name(cell)) {
        matches.push_back({0, PiiDetector::NameLike, redact_excerpt(cell)});
    }

    std::stable_sort(matches.begin(), matches.end(),
                     [](const Match& a, const Match& b) {
                         if (a.detector != b.detector) return a.detector < b.detector;
                         return a.pos < b.pos;
                     });
    for (Match& m : matches) {
        out.findings.push_back({column, row, m.detector, std::move(m.excerpt)});
    }
}

int class_rank(PiiClass c)
{
    switch (c) {
    case PiiClass::Financial: return 3;
    case PiiClass::DirectIdentifier: return 2;
    case PiiClass::QuasiIdentifier: return 1;
    case PiiClass::None: return 0;
    }
    return 0;
}

} // namespace

PiiFindings profile_pii(const DatasetSample& sample, const PiiOptions& options)
{
    std::vector<std::regex> national_id;
    national_id.reserve(options.national_id_patterns.size());
    for (const std::string& pattern : options.national_id_patterns) {
        national_id.emplace_back(pattern);
    }

    PiiFindings out;
    for (std::size_t r = 0; r < sample.rows.size(); ++r) {
        for (const auto& [column, cell] : sample.rows[r]) {
            const std::string* s = std::get_if<std::string>(&cell);
            if (!s) continue;
            scan_cell(*s, column, r, national_id, out);
        }
    }

    for (const PiiFinding& f : out.findings) {
        PiiClass proposed = detector_class(f.detector);
        auto [it, inserted] =
            out.proposed_classifications.emplace(f.column, proposed);
        if (!inserted && class_rank(proposed) > class_rank(it->second)) {
            it->second = proposed;
        }
    }

    bool sensitive = std::any_of(
        out.proposed_classifications.begin(), out.proposed_classifications.end(),
        [](const auto& kv) {
            return kv.second == PiiClass::Financial ||
                   kv.second == PiiClass::DirectIdentifier;
        });
    if (sensitive) out.routing.push_back(PiiAction::RecommendMasking);
    if (!out.findings.empty()) out.routing.push_back(PiiAction::NotifySecurity);
    return out;
}

std::pair<DataContract, std::vector<PiiAction>>
apply_classification(const DataContract& contract, const PiiFindings& findings)
{
    DataContract amended = contract;
    bool changed = false;

    for (const auto& [column, proposed] : findings.proposed_classifications) {
        FieldSpec* field = nullptr;
        for (FieldSpec& f : amended.schema) {
            if (f.name == column) {
                field = &f;
                break;
            }
        }
        if (!field) continue; // column unknown to the contract; report-only

        if (!field->pii_class) {
            field->pii_class = proposed;
            changed = true;
        }
        bool listed = std::any_of(amended.compliance.pii_fields.begin(),
                                  amended.compliance.pii_fields.end(),
                                  [&](const std::string& f) { return f == column; });
        if (!listed) {
            amended.compliance.pii_fields.push_back(column);
            changed = true;
        }
    }

    std::vector<PiiAction> routing;
    if (changed) {
        amended.status = LifecycleState::Draft;
        routing.push_back(PiiAction::ApplyClassification);
    } else {
        amended = contract;
    }
    for (PiiAction a : findings.routing) routing.push_back(a);
    return {std::move(amended), std::move(routing)};
}

} // namespace meshgate
