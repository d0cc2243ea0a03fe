// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0
//
// meshgate: draft, review, validate, diff, score, pii-scan, stage.
// Exit codes are a CI contract: 0 success/pass, 1 domain failure,
// 2 usage/config error, 3 provider/transport failure, 4 store integrity.

#include "meshgate/context.hpp"
#include "meshgate/contract.hpp"
#include "meshgate/diff.hpp"
#include "meshgate/drafting.hpp"
#include "meshgate/enforcement.hpp"
#include "meshgate/errors.hpp"
#include "meshgate/metrics.hpp"
#include "meshgate/pii.hpp"
#include "meshgate/registry.hpp"
#include "meshgate/stages.hpp"
#include "meshgate/time.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <CLI11.hpp>
#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace meshgate;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTransport = 3;
constexpr int kExitIntegrity = 4;

std::string read_file(const fs::path& path, const std::string& what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(what + " not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

UtcSeconds parse_utc_or_fail(const std::string& text, const std::string& what)
{
    auto t = parse_utc(text);
    if (!t) {
        throw UsageError(what + " must be an ISO-8601 UTC timestamp "
                                "(YYYY-MM-DDTHH:MM:SSZ): " +
                         text);
    }
    return *t;
}

// --as-of beats the MESHGATE_NOW environment variable beats the system
// clock; injection keeps golden runs byte-reproducible.
Clock make_clock(const std::string& as_of)
{
    if (!as_of.empty()) {
        UtcSeconds t = parse_utc_or_fail(as_of, "--as-of");
        return [t] { return t; };
    }
    if (const char* env = std::getenv("MESHGATE_NOW")) {
        UtcSeconds t = parse_utc_or_fail(env, "MESHGATE_NOW");
        return [t] { return t; };
    }
    return utc_now;
}

MaturityStage resolve_stage(const std::string& flag_value)
{
    std::string name = flag_value;
    if (name.empty()) {
        std::ifstream conf("meshgate.conf");
        std::string line;
        while (std::getline(conf, line)) {
            const std::string key = "stage:";
            if (line.rfind(key, 0) == 0) {
                std::size_t start = line.find_first_not_of(' ', key.size());
                if (start != std::string::npos) name = line.substr(start);
            }
        }
    }
    if (name.empty()) return MaturityStage::Foundation;
    auto stage = maturity_stage_from(name);
    if (!stage) throw UsageError("unknown stage: " + name);
    return *stage;
}

DataContract parse_contract_file(const fs::path& path)
{
    auto result = parse_contract(read_file(path, "contract file"));
    if (!result.ok()) {
        std::string msg = "cannot parse " + path.string();
        for (const auto& e : result.errors) {
            msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
        }
        throw UsageError(msg);
    }
    return *result.contract;
}

// ---------------------------------------------------------------------------
// Model transports
// ---------------------------------------------------------------------------

// `mock:` endpoints keep the pipeline exercisable without a provider:
//   mock:fail                 every call raises a transport error
//   mock:file:<path>          every call answers with the file's contents
//   mock:flaky:<k>:<path>     first k calls fail, then answer with the file
class MockFailTransport : public ModelTransport {
public:
    std::string complete(const PromptDocument&) override
    {
        throw TransportError("scripted provider failure", 1);
    }
};

class MockFileTransport : public ModelTransport {
public:
    explicit MockFileTransport(fs::path path, int failures_first = 0)
        : path_(std::move(path)), remaining_failures_(failures_first) {}

    std::string complete(const PromptDocument&) override
    {
        if (remaining_failures_ > 0) {
            --remaining_failures_;
            throw TransportError("scripted transient failure", 1);
        }
        return read_file(path_, "mock response file");
    }

private:
    fs::path path_;
    int remaining_failures_;
};

class HttpTransport : public ModelTransport {
public:
    HttpTransport(std::string endpoint, double timeout_seconds)
        : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

    std::string complete(const PromptDocument& prompt) override
    {
        // endpoint = scheme://host[:port][/path]
        std::size_t scheme_end = endpoint_.find("://");
        std::size_t path_start = endpoint_.find('/', scheme_end + 3);
        std::string base = path_start == std::string::npos
                               ? endpoint_
                               : endpoint_.substr(0, path_start);
        std::string path = path_start == std::string::npos
                               ? std::string("/")
                               : endpoint_.substr(path_start);

        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration<double>(timeout_seconds_));
        client.set_read_timeout(std::chrono::duration<double>(timeout_seconds_));

        const std::string body = prompt.system_text + "\n" + prompt.context_text +
                                 "\n" + prompt.output_schema_descriptor;
        auto response = client.Post(path, body, "text/plain");
        if (!response || response->status < 200 || response->status >= 300) {
            throw TransportError("provider request failed: " + endpoint_, 1);
        }
        return response->body;
    }

private:
    std::string endpoint_;
    double timeout_seconds_;
};

ProviderConfig load_provider_config(const fs::path& path)
{
    ProviderConfig config;
    bool have_endpoint = false;
    std::istringstream in(read_file(path, "provider config"));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(line_no) +
                             ": expected key: value");
        }
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        std::size_t start = value.find_first_not_of(' ');
        value = start == std::string::npos ? "" : value.substr(start);

        auto bad = [&](const std::string& msg) {
            return UsageError(path.string() + ":" + std::to_string(line_no) + ": " +
                              msg);
        };
        if (key == "endpoint") {
            config.endpoint = value;
            have_endpoint = true;
        } else if (key == "max_retries") {
            auto v = parse_int(value);
            if (!v || *v < 0 || *v > 10) throw bad("max_retries must lie in [0, 10]");
            config.max_retries = static_cast<int>(*v);
        } else if (key == "timeout_seconds") {
            auto v = parse_double(value);
            if (!v || *v <= 0) throw bad("timeout_seconds must be positive");
            config.timeout_seconds = *v;
        } else if (key == "backoff_base_seconds") {
            auto v = parse_double(value);
            if (!v || *v <= 0) throw bad("backoff_base_seconds must be positive");
            config.backoff_base_seconds = *v;
        } else {
            throw bad("unknown key: " + key);
        }
    }
    if (!have_endpoint) throw UsageError(path.string() + ": missing endpoint");
    return config;
}

std::unique_ptr<ModelTransport> make_transport(const ProviderConfig& config)
{
    const std::string& e = config.endpoint;
    if (e == "mock:fail") return std::make_unique<MockFailTransport>();
    if (e.rfind("mock:file:", 0) == 0) {
        return std::make_unique<MockFileTransport>(e.substr(10));
    }
    if (e.rfind("mock:flaky:", 0) == 0) {
        std::string rest = e.substr(11);
        std::size_t colon = rest.find(':');
        if (colon == std::string::npos) {
            throw UsageError("mock:flaky needs <failures>:<path>");
        }
        auto k = parse_int(rest.substr(0, colon));
        if (!k || *k < 0) throw UsageError("mock:flaky needs a non-negative count");
        return std::make_unique<MockFileTransport>(rest.substr(colon + 1),
                                                   static_cast<int>(*k));
    }
    if (e.rfind("http://", 0) == 0 || e.rfind("https://", 0) == 0) {
        return std::make_unique<HttpTransport>(e, config.timeout_seconds);
    }
    throw UsageError("unsupported endpoint: " + e);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct DraftArgs {
    std::string dataset, catalog, rulepack, notes, store, provider_config, as_of;
    bool offline = false;
};

int cmd_draft(const DraftArgs& args)
{
    if (args.offline == !args.provider_config.empty()) {
        throw UsageError("choose exactly one of --offline or --provider-config");
    }
    const Clock clock = make_clock(args.as_of);

    TableMetadata meta = fetch_metadata(args.catalog, args.dataset);
    RulePack pack = load_compliance(args.rulepack);
    AnnotationSet notes = collect_annotations(read_file(args.notes, "notes file"));
    ContextBundle bundle =
        assemble_context(std::move(meta), std::move(pack), std::move(notes));

    DraftResult result;
    if (args.offline) {
        result = deterministic_draft(bundle, clock);
    } else {
        ProviderConfig config = load_provider_config(args.provider_config);
        auto transport = make_transport(config);
        result = draft_contract(bundle, config, transport.get(), clock);
    }

    std::cout << serialize(result.contract);
    ReviewRecord record = submit_draft(result, args.store, clock);
    std::cerr << "submitted " << record.record_id << " for review\n";
    for (const std::string& note : result.notes) {
        std::cerr << "note: " << note << "\n";
    }
    return kExitOk;
}

struct ReviewArgs {
    std::string id, team, email, note, store, as_of;
    bool approve = false;
    bool reject = false;
};

int cmd_review(const ReviewArgs& args)
{
    if (args.approve == args.reject) {
        throw UsageError("choose exactly one of --approve or --reject");
    }
    const Clock clock = make_clock(args.as_of);
    ReviewRecord record =
        review(args.id, args.approve ? ReviewDecision::Approve : ReviewDecision::Reject,
               OwnerSpec{args.team, args.email}, args.note, args.store, clock);
    if (args.approve) {
        std::cout << "approved " << record.contract.dataset_name << " "
                  << record.contract.version.str() << "\n";
        return kExitOk;
    }
    std::cout << "rejected " << record.contract.dataset_name << "\n";
    return kExitDomainFailure;
}

struct ValidateArgs {
    std::string contract, data, last_updated, as_of, stage;
    bool local_override = false;
};

int cmd_validate(const ValidateArgs& args)
{
    const MaturityStage stage = resolve_stage(args.stage);
    const Clock clock = make_clock(args.as_of);

    DataContract contract = parse_contract_file(args.contract);
    if (contract.status != LifecycleState::Approved) {
        throw UsageError("validate needs an approved contract, got status " +
                         std::string(to_string(contract.status)));
    }

    DatasetSample sample = load_sample(read_file(args.data, "data file"), args.data);
    if (sample.dataset_name.empty()) sample.dataset_name = contract.dataset_name;
    if (!args.last_updated.empty()) {
        sample.last_updated = parse_utc_or_fail(args.last_updated, "--last-updated");
    } else if (sample.last_updated == UtcSeconds{}) {
        throw UsageError("data file carries no `# last_updated:` sidecar; "
                         "pass --last-updated");
    }

    ValidationReport report = validate_dataset(contract, sample, clock());

    std::cout << "dataset\t" << contract.dataset_name << "\n";
    for (const SchemaFinding& f : report.schema_findings) {
        std::cout << "schema_finding\t" << f.column << "\t" << to_string(f.issue)
                  << "\n";
    }
    for (const RuleFinding& f : report.rule_findings) {
        std::cout << "rule_finding\t" << f.field << "\t" << to_string(f.kind) << "\t"
                  << to_string(f.severity) << "\t";
        for (std::size_t i = 0; i < f.failing_rows.size(); ++i) {
            if (i) std::cout << ",";
            std::cout << f.failing_rows[i];
        }
        std::cout << "\n";
    }
    std::cout << "freshness_age_seconds\t" << report.freshness.age_seconds << "\n";
    std::cout << "freshness_limit_seconds\t" << report.freshness.limit_seconds << "\n";
    std::cout << "freshness_pass\t" << (report.freshness.pass ? "true" : "false")
              << "\n";
    std::cout << "pass_rate\t" << format_double(report.pass_rate) << "\n";
    std::cout << "verdict\t" << (report.verdict ? "pass" : "fail") << "\n";

    if (report.verdict) return kExitOk;
    if (gate_decision(stage, GovernanceGate::QualityThresholds, args.local_override) ==
        GateOutcome::WarnOnFail) {
        std::cerr << "warning: validation failed; " << to_string(stage)
                  << " stage does not block\n";
        return kExitOk;
    }
    return kExitDomainFailure;
}

struct DiffArgs {
    std::string old_path, new_path, stage;
    bool local_override = false;
};

int cmd_diff(const DiffArgs& args)
{
    const MaturityStage stage = resolve_stage(args.stage);
    DataContract old_contract = parse_contract_file(args.old_path);
    DataContract new_contract = parse_contract_file(args.new_path);

    CompatibilityReport report = diff(old_contract, new_contract);
    for (const ContractChange& change : report.changes) {
        std::cout << "change\t" << change.path << "\t" << to_string(change.kind)
                  << "\t" << to_string(change.classification) << "\n";
    }
    std::cout << "verdict\t" << to_string(report.verdict) << "\n";
    std::cout << "next_version\t" << next_version(old_contract.version, report).str()
              << "\n";

    if (report.verdict != Classification::Breaking) return kExitOk;
    if (gate_decision(stage, GovernanceGate::SchemaDiffBlocking, args.local_override) ==
        GateOutcome::WarnOnFail) {
        std::cerr << "warning: breaking change; " << to_string(stage)
                  << " stage reports without blocking\n";
        return kExitOk;
    }
    return kExitDomainFailure;
}

struct ScoreArgs {
    std::string events, baselines, window_start, window_end;
};

int cmd_score(const ScoreArgs& args)
{
    EventLog log = parse_event_log(read_file(args.events, "event log"), args.events);
    ValueScoreInput input =
        load_baselines(read_file(args.baselines, "baselines file"), args.baselines);

    const UtcSeconds start = parse_utc_or_fail(args.window_start, "--window-start");
    const UtcSeconds end = parse_utc_or_fail(args.window_end, "--window-end");

    input.U = static_cast<double>(compute_U(log.accesses, start, end));
    input.F = compute_F(log.sessions);
    input.I = compute_I(log.tickets);
    const double v = value_score(input);

    std::cout << "U\t" << format_double(input.U) << "\n";
    std::cout << "F\t" << format_double(input.F) << "\n";
    std::cout << "I\t" << format_double(input.I) << "\n";
    std::cout << "V\t" << render_value(v) << "\n";
    return kExitOk;
}

struct PiiScanArgs {
    std::string data, contract, store, as_of;
    bool strict = false;
};

int cmd_pii_scan(const PiiScanArgs& args)
{
    DatasetSample sample = load_sample(read_file(args.data, "data file"), args.data);
    PiiFindings findings = profile_pii(sample);

    for (const PiiFinding& f : findings.findings) {
        std::cout << "finding\t" << f.column << "\t" << f.row << "\t"
                  << to_string(f.detector) << "\t" << f.excerpt << "\n";
    }
    for (const auto& [column, pii_class] : findings.proposed_classifications) {
        std::cout << "classification\t" << column << "\t" << to_string(pii_class)
                  << "\n";
    }

    if (!args.contract.empty()) {
        DataContract contract = parse_contract_file(args.contract);
        if (!sample.dataset_name.empty() &&
            sample.dataset_name != contract.dataset_name) {
            throw UsageError("sample dataset " + sample.dataset_name +
                             " does not match contract " + contract.dataset_name);
        }
        auto [amended, routing] = apply_classification(contract, findings);
        for (PiiAction action : routing) {
            std::cout << "routing\t" << to_string(action) << "\n";
        }
        if (amended != contract) {
            if (args.store.empty()) {
                throw UsageError("--store is required to submit the amended draft");
            }
            DraftResult draft;
            draft.contract = amended;
            ReviewRecord record =
                submit_draft(draft, args.store, make_clock(args.as_of));
            std::cout << "amended_draft\t" << record.record_id << "\n";
            std::cerr << "submitted amended draft " << record.record_id
                      << " for review\n";
        }
    } else {
        for (PiiAction action : findings.routing) {
            std::cout << "routing\t" << to_string(action) << "\n";
        }
    }

    if (findings.findings.empty()) {
        std::cerr << "no findings\n";
        return kExitOk;
    }
    return args.strict ? kExitDomainFailure : kExitOk;
}

int cmd_stage(const std::string& stage_flag)
{
    if (!stage_flag.empty()) {
        auto stage = maturity_stage_from(stage_flag);
        if (!stage) throw UsageError("unknown stage: " + stage_flag);
        std::cout << render_stage_profile(*stage);
        return kExitOk;
    }
    for (MaturityStage stage : kStageOrder) {
        std::cout << render_stage_profile(stage);
    }
    return kExitOk;
}

int dispatch(int argc, char** argv)
{
    CLI::App app{"data contract control plane for hub-and-spoke platforms"};
    app.require_subcommand(1);

    DraftArgs draft_args;
    auto* draft = app.add_subcommand("draft", "draft a contract and submit it");
    draft->add_option("--dataset", draft_args.dataset)->required();
    draft->add_option("--catalog", draft_args.catalog)->required();
    draft->add_option("--rulepack", draft_args.rulepack)->required();
    draft->add_option("--notes", draft_args.notes)->required();
    draft->add_option("--store", draft_args.store)->required();
    draft->add_flag("--offline", draft_args.offline);
    draft->add_option("--provider-config", draft_args.provider_config);
    draft->add_option("--as-of", draft_args.as_of);

    ReviewArgs review_args;
    auto* review = app.add_subcommand("review", "approve or reject a pending draft");
    review->add_option("--id", review_args.id)->required();
    review->add_flag("--approve", review_args.approve);
    review->add_flag("--reject", review_args.reject);
    review->add_option("--reviewer-team", review_args.team)->required();
    review->add_option("--reviewer-email", review_args.email)->required();
    review->add_option("--note", review_args.note);
    review->add_option("--store", review_args.store)->required();
    review->add_option("--as-of", review_args.as_of);

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "check a dataset against a contract");
    validate->add_option("--contract", validate_args.contract)->required();
    validate->add_option("--data", validate_args.data)->required();
    validate->add_option("--last-updated", validate_args.last_updated);
    validate->add_option("--as-of", validate_args.as_of);
    validate->add_option("--stage", validate_args.stage);
    validate->add_flag("--local-override", validate_args.local_override);

    DiffArgs diff_args;
    auto* diff_cmd = app.add_subcommand("diff", "classify changes between versions");
    diff_cmd->add_option("old", diff_args.old_path)->required();
    diff_cmd->add_option("new", diff_args.new_path)->required();
    diff_cmd->add_option("--stage", diff_args.stage);
    diff_cmd->add_flag("--local-override", diff_args.local_override);

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "compute platform value metrics");
    score->add_option("--events", score_args.events)->required();
    score->add_option("--baselines", score_args.baselines)->required();
    score->add_option("--window-start", score_args.window_start)->required();
    score->add_option("--window-end", score_args.window_end)->required();

    PiiScanArgs pii_args;
    auto* pii = app.add_subcommand("pii-scan", "profile a dataset for PII");
    pii->add_option("--data", pii_args.data)->required();
    pii->add_option("--contract", pii_args.contract);
    pii->add_option("--store", pii_args.store);
    pii->add_option("--as-of", pii_args.as_of);
    pii->add_flag("--strict", pii_args.strict);

    std::string stage_flag;
    auto* stage = app.add_subcommand("stage", "show stage policy profiles");
    stage->add_option("--stage", stage_flag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (draft->parsed()) return cmd_draft(draft_args);
    if (review->parsed()) return cmd_review(review_args);
    if (validate->parsed()) return cmd_validate(validate_args);
    if (diff_cmd->parsed()) return cmd_diff(diff_args);
    if (score->parsed()) return cmd_score(score_args);
    if (pii->parsed()) return cmd_pii_scan(pii_args);
    if (stage->parsed()) return cmd_stage(stage_flag);
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return dispatch(argc, argv);
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ClockSkewError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        // schema enforcement, duplicate submission, undefined metrics
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
