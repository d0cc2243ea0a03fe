#include "meshgate/drafting.hpp"
#include "meshgate/errors.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>

using namespace meshgate;

namespace {

ContextBundle fixture_bundle()
{
    auto dir = testsupport::fixtures_dir();
    TableMetadata meta = fetch_metadata(dir / "catalog", "sales.orders");
    RulePack pack = load_compliance(dir / "rulepacks" / "eu_baseline.rulepack");
    AnnotationSet notes = collect_annotations(
        testsupport::read_text(dir / "notes" / "sales.orders.notes"));
    return assemble_context(std::move(meta), std::move(pack), std::move(notes));
}

Clock fixed_clock(const char* iso)
{
    UtcSeconds t = *parse_utc(iso);
    return [t] { return t; };
}

// Scripted transport: throws for the first `failures` calls, then replays
// `responses` in order (repeating the last one).
class ScriptedTransport : public ModelTransport {
public:
    ScriptedTransport(int failures, std::vector<std::string> responses)
        : failures_(failures), responses_(std::move(responses)) {}

    std::string complete(const PromptDocument& prompt) override
    {
        prompts.push_back(prompt);
        ++calls;
        if (calls <= failures_) throw TransportError("scripted outage", 1);
        const std::size_t i = static_cast<std::size_t>(calls - failures_) - 1;
        return responses_[std::min(i, responses_.size() - 1)];
    }

    int calls = 0;
    std::vector<PromptDocument> prompts;

private:
    int failures_;
    std::vector<std::string> responses_;
};

} // namespace

TEST_CASE("physical type mapping is closed and case-insensitive")
{
    CHECK(map_physical_type("varchar(255)") == LogicalType::String);
    CHECK(map_physical_type("VARCHAR") == LogicalType::String);
    CHECK(map_physical_type("text") == LogicalType::String);
    CHECK(map_physical_type("char(8)") == LogicalType::String);
    CHECK(map_physical_type("int") == LogicalType::Integer);
    CHECK(map_physical_type("bigint") == LogicalType::Integer);
    CHECK(map_physical_type("smallint") == LogicalType::Integer);
    CHECK(map_physical_type("double") == LogicalType::Float);
    CHECK(map_physical_type("real") == LogicalType::Float);
    CHECK(map_physical_type("bool") == LogicalType::Boolean);
    CHECK(map_physical_type("date") == LogicalType::Date);
    CHECK(map_physical_type("timestamp") == LogicalType::Timestamp);
    CHECK(map_physical_type("numeric(12,2)") == LogicalType::Decimal);
    CHECK(map_physical_type("decimal(10,0)") == LogicalType::Decimal);
    CHECK_FALSE(map_physical_type("blob"));
    CHECK_FALSE(map_physical_type("varchar2"));
    CHECK_FALSE(map_physical_type(""));
}

TEST_CASE("deterministic draft derives everything from the bundle")
{
    ContextBundle bundle = fixture_bundle();
    DraftResult result =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    const DataContract& c = result.contract;

    CHECK(c.dataset_name == "sales.orders");
    CHECK(c.version == SemVer{0, 1, 0});
    CHECK(c.status == LifecycleState::Draft);
    REQUIRE(c.schema.size() == 5);

    const FieldSpec* id = c.find_field("order_id");
    REQUIRE(id);
    CHECK(id->type == LogicalType::Integer);
    CHECK_FALSE(id->nullable);
    REQUIRE(id->rules.size() == 1);
    CHECK(id->rules[0].kind == RuleKind::NotNull);
    CHECK(id->rules[0].severity == Severity::Error);

    const FieldSpec* email = c.find_field("customer_email");
    REQUIRE(email);
    CHECK(email->type == LogicalType::String);
    CHECK(email->nullable);
    CHECK(email->rules.empty());
    CHECK(email->pii_class == PiiClass::DirectIdentifier);

    CHECK(c.compliance.pii_fields == std::vector<std::string>{"customer_email"});
    CHECK(c.compliance.gdpr);
    CHECK(c.compliance.retention_days == 365);

    // hints: `fresh within 6h`, `team sales-data email owners@sales.example`
    CHECK(c.sla.freshness_max_age_seconds == 21600);
    CHECK(c.sla.quality_min_pass_rate == 0.99);
    CHECK(c.owner.team == "sales-data");
    CHECK(c.owner.email == "owners@sales.example");

    CHECK(c.provenance.drafter == DrafterKind::Deterministic);
    CHECK(c.provenance.context_digest == bundle.digest);
    CHECK(format_utc(c.provenance.drafted_at) == "2026-03-02T12:00:00Z");
    CHECK(validate(c).empty());

    // pure function of the bundle: same inputs, same bytes
    DraftResult again =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    CHECK(serialize(again.contract) == serialize(c));
}

TEST_CASE("offline draft matches the recorded golden document")
{
    ContextBundle bundle = fixture_bundle();
    DraftResult result =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    const std::string golden = testsupport::read_text(
        testsupport::fixtures_dir() / "golden" / "sales.orders.offline.contract");
    REQUIRE_FALSE(golden.empty());
    CHECK(serialize(result.contract) == golden);
}

TEST_CASE("deterministic draft without hints uses placeholders")
{
    TableMetadata meta =
        parse_catalog("dataset: a.b\ncolumns:\n  - x|int|true|col x\n", "cat");
    RulePack pack = parse_rulepack("pack_id: p\n", "rp");
    ContextBundle bundle = assemble_context(meta, pack, {});
    DraftResult result =
        deterministic_draft(bundle, fixed_clock("2026-01-01T00:00:00Z"));
    CHECK(result.contract.owner.team == "data-platform");
    CHECK(result.contract.owner.email == "owner@placeholder.invalid");
    CHECK(result.contract.sla.freshness_max_age_seconds == 86400);
    CHECK(result.contract.sla.quality_min_pass_rate == 0.99);
    CHECK_FALSE(result.contract.compliance.gdpr);
    CHECK_FALSE(result.contract.compliance.retention_days);
    CHECK(result.contract.compliance.pii_fields.empty());
}

TEST_CASE("later sla hints win and malformed hints are ignored")
{
    TableMetadata meta =
        parse_catalog("dataset: a.b\ncolumns:\n  - x|int|true|c\n", "cat");
    RulePack pack = parse_rulepack("pack_id: p\n", "rp");
    AnnotationSet notes = collect_annotations("[sla_hint] fresh within 2h\n"
                                              "[sla_hint] fresh within soon\n"
                                              "[sla_hint] fresh within 30m\n");
    ContextBundle bundle = assemble_context(meta, pack, notes);
    DraftResult result =
        deterministic_draft(bundle, fixed_clock("2026-01-01T00:00:00Z"));
    CHECK(result.contract.sla.freshness_max_age_seconds == 1800);
}

TEST_CASE("pii label matching is token based, not substring based")
{
    TableMetadata meta = parse_catalog("dataset: a.b\ncolumns:\n"
                                       "  - credit_card_number|text|true|a\n"
                                       "  - cardinality|int|true|b\n"
                                       "  - emailed_flag|bool|true|c\n"
                                       "  - contact_email|text|true|d\n",
                                       "cat");
    RulePack pack = parse_rulepack("pack_id: p\n"
                                   "pattern: credit_card|luhn\n"
                                   "pattern: email|addr-spec\n",
                                   "rp");
    ContextBundle bundle = assemble_context(meta, pack, {});
    DraftResult result =
        deterministic_draft(bundle, fixed_clock("2026-01-01T00:00:00Z"));
    const DataContract& c = result.contract;
    CHECK(c.find_field("credit_card_number")->pii_class == PiiClass::Financial);
    CHECK_FALSE(c.find_field("cardinality")->pii_class.has_value());
    CHECK_FALSE(c.find_field("emailed_flag")->pii_class.has_value());
    CHECK(c.find_field("contact_email")->pii_class == PiiClass::DirectIdentifier);
    CHECK(c.compliance.pii_fields ==
          std::vector<std::string>{"credit_card_number", "contact_email"});
}

TEST_CASE("unmappable physical types make the draft fail")
{
    TableMetadata meta =
        parse_catalog("dataset: a.b\ncolumns:\n  - x|blob|true|c\n", "cat");
    RulePack pack = parse_rulepack("pack_id: p\n", "rp");
    ContextBundle bundle = assemble_context(meta, pack, {});
    CHECK_THROWS_AS(
        (void)deterministic_draft(bundle, fixed_clock("2026-01-01T00:00:00Z")),
        ValidationError);
}

TEST_CASE("build_prompt embeds the rendered context")
{
    ContextBundle bundle = fixture_bundle();
    PromptDocument prompt = build_prompt(bundle);
    CHECK(prompt.context_text ==
          render_context(bundle.metadata, bundle.rulepack, bundle.annotations));
    CHECK_FALSE(prompt.system_text.empty());
    CHECK(prompt.output_schema_descriptor.find("dataset_name") != std::string::npos);
    CHECK(prompt.output_schema_descriptor.find("not_null") != std::string::npos);
}

TEST_CASE("call_model retries with exponential backoff")
{
    PromptDocument prompt;
    ProviderConfig config;
    config.endpoint = "mock:test";
    config.max_retries = 3;
    config.backoff_base_seconds = 0.5;

    for (int failures = 0; failures <= 3; ++failures) {
        ScriptedTransport transport(failures, {"answer"});
        std::vector<double> delays;
        auto sleeper = [&delays](double s) { delays.push_back(s); };
        std::string out = call_model(prompt, config, transport, sleeper);
        CHECK(out == "answer");
        CHECK(transport.calls == failures + 1);
        REQUIRE(delays.size() == static_cast<std::size_t>(failures));
        for (int i = 0; i < failures; ++i) {
            CHECK(delays[static_cast<std::size_t>(i)] ==
                  doctest::Approx(0.5 * std::pow(2.0, i)));
        }
    }
}

TEST_CASE("call_model exhausts retries and reports the attempt count")
{
    PromptDocument prompt;
    ProviderConfig config;
    config.endpoint = "mock:test";

    for (int max_retries = 0; max_retries <= 3; ++max_retries) {
        config.max_retries = max_retries;
        ScriptedTransport transport(1000, {});
        std::vector<double> delays;
        auto sleeper = [&delays](double s) { delays.push_back(s); };
        try {
            (void)call_model(prompt, config, transport, sleeper);
            FAIL("expected TransportError");
        } catch (const TransportError& e) {
            CHECK(e.attempts() == max_retries + 1);
            CHECK(transport.calls == max_retries + 1);
            CHECK(delays.size() == static_cast<std::size_t>(max_retries));
        }
    }
}

TEST_CASE("call_model validates provider configuration")
{
    PromptDocument prompt;
    ScriptedTransport transport(0, {"x"});
    ProviderConfig config;
    config.endpoint = "mock:test";

    config.max_retries = -1;
    CHECK_THROWS_AS((void)call_model(prompt, config, transport), UsageError);
    config.max_retries = 11;
    CHECK_THROWS_AS((void)call_model(prompt, config, transport), UsageError);
    config.max_retries = 2;
    config.timeout_seconds = 0;
    CHECK_THROWS_AS((void)call_model(prompt, config, transport), UsageError);
    config.timeout_seconds = 30;
    config.backoff_base_seconds = 0;
    CHECK_THROWS_AS((void)call_model(prompt, config, transport), UsageError);
}

TEST_CASE("enforce_schema accepts a valid document on the first pass")
{
    ContextBundle bundle = fixture_bundle();
    DraftResult offline =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    const std::string raw = serialize(offline.contract);

    DraftResult result = enforce_schema(raw, bundle, nullptr, nullptr,
                                        fixed_clock("2026-03-02T13:00:00Z"),
                                        [](double) {});
    CHECK(result.repair_attempts == 0);
    CHECK(result.contract.status == LifecycleState::Draft);
    CHECK(result.contract.provenance.drafter == DrafterKind::Model);
    CHECK(result.contract.provenance.context_digest == bundle.digest);
    CHECK(format_utc(result.contract.provenance.drafted_at) ==
          "2026-03-02T13:00:00Z");
}

TEST_CASE("enforce_schema repairs malformed output within the budget")
{
    ContextBundle bundle = fixture_bundle();
    DraftResult offline =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    const std::string good = serialize(offline.contract);
    const std::string broken = "this is not a contract\n";
    const std::string half = good + "unexpected_trailer: x\n";

    ProviderConfig config;
    config.endpoint = "mock:test";

    SUBCASE("one repair round")
    {
        ScriptedTransport transport(0, {good});
        DraftResult result =
            enforce_schema(broken, bundle, &transport, &config,
                           fixed_clock("2026-03-02T13:00:00Z"), [](double) {});
        CHECK(result.repair_attempts == 1);
        CHECK(transport.calls == 1);
        REQUIRE_FALSE(result.notes.empty());
        CHECK(result.notes.front().find("repair") != std::string::npos);

        // the repair prompt replays the context plus the parse errors
        REQUIRE(transport.prompts.size() == 1);
        const std::string& ctx = transport.prompts[0].context_text;
        CHECK(ctx.find("ERRORS:\n") != std::string::npos);
        CHECK(ctx.find("line 1:") != std::string::npos);
    }
    SUBCASE("two repair rounds")
    {
        ScriptedTransport transport(0, {half, good});
        DraftResult result =
            enforce_schema(broken, bundle, &transport, &config,
                           fixed_clock("2026-03-02T13:00:00Z"), [](double) {});
        CHECK(result.repair_attempts == 2);
        CHECK(transport.calls == 2);
    }
    SUBCASE("budget exhausted after two repairs")
    {
        ScriptedTransport transport(0, {broken, broken, broken});
        try {
            (void)enforce_schema(broken, bundle, &transport, &config,
                                 fixed_clock("2026-03-02T13:00:00Z"), [](double) {});
            FAIL("expected SchemaEnforcementError");
        } catch (const SchemaEnforcementError& e) {
            CHECK(transport.calls == kMaxRepairAttempts);
            CHECK_FALSE(e.errors().empty());
        }
    }
    SUBCASE("no transport means no repair")
    {
        CHECK_THROWS_AS(
            (void)enforce_schema(broken, bundle, nullptr, nullptr,
                                 fixed_clock("2026-03-02T13:00:00Z"), [](double) {}),
            SchemaEnforcementError);
    }
}

TEST_CASE("draft_contract wires the full pipeline through the transport")
{
    ContextBundle bundle = fixture_bundle();
    DraftResult offline =
        deterministic_draft(bundle, fixed_clock("2026-03-02T12:00:00Z"));
    const std::string good = serialize(offline.contract);

    ProviderConfig config;
    config.endpoint = "mock:test";
    config.max_retries = 2;

    SUBCASE("transient outage then success")
    {
        ScriptedTransport transport(2, {good});
        DraftResult result =
            draft_contract(bundle, config, &transport,
                           fixed_clock("2026-03-02T13:00:00Z"), [](double) {});
        CHECK(transport.calls == 3);
        CHECK(result.contract.provenance.drafter == DrafterKind::Model);
        CHECK(result.contract.dataset_name == "sales.orders");
    }
    SUBCASE("outage exhausts the budget")
    {
        ScriptedTransport transport(1000, {});
        CHECK_THROWS_AS((void)draft_contract(bundle, config, &transport,
                                             fixed_clock("2026-03-02T13:00:00Z"),
                                             [](double) {}),
                        TransportError);
    }
    SUBCASE("null transport falls back to the deterministic drafter")
    {
        DraftResult result =
            draft_contract(bundle, config, nullptr,
                           fixed_clock("2026-03-02T12:00:00Z"), [](double) {});
        CHECK(serialize(result.contract) == serialize(offline.contract));
    }
}
