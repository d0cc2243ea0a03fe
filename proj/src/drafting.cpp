// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/drafting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace meshgate {

namespace {

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> underscore_tokens(std::string_view s)
{
    std::vector<std::string> tokens;
    std::string current;
    for (char c : s) {
        if (c == '_' || c == '.') {
            if (!current.empty()) tokens.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

// `label` split on underscores must appear as a consecutive token run inside
// the column name, so `credit_card` matches `credit_card_number` but not
// `cardinality`.
bool name_matches_label(const std::string& column_name, const std::string& label)
{
    const auto name_tokens = underscore_tokens(to_lower(column_name));
    const auto label_tokens = underscore_tokens(to_lower(label));
    if (label_tokens.empty() || label_tokens.size() > name_tokens.size()) return false;
    for (std::size_t start = 0; start + label_tokens.size() <= name_tokens.size();
         ++start) {
        bool all = true;
        for (std::size_t i = 0; i < label_tokens.size(); ++i) {
            if (name_tokens[start + i] != label_tokens[i]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

PiiClass label_class(const std::string& label)
{
    const std::string l = to_lower(label);
    if (l == "credit_card") return PiiClass::Financial;
    if (l == "name" || l == "address") return PiiClass::QuasiIdentifier;
    // email, phone, national ids, and anything unrecognized are treated as
    // direct identifiers; the review gate can downgrade.
    return PiiClass::DirectIdentifier;
}

} // namespace

Sleeper real_sleeper()
{
    return [](double seconds) {
        std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };
}

std::optional<LogicalType> map_physical_type(std::string_view physical)
{
    std::string t = to_lower(physical);
    std::size_t paren = t.find('(');
    if (paren != std::string::npos) t.resize(paren);
    while (!t.empty() && t.back() == ' ') t.pop_back();

    static const std::map<std::string, LogicalType> table = {
        {"varchar", LogicalType::String},   {"text", LogicalType::String},
        {"char", LogicalType::String},      {"int", LogicalType::Integer},
        {"bigint", LogicalType::Integer},   {"smallint", LogicalType::Integer},
        {"double", LogicalType::Float},     {"real", LogicalType::Float},
        {"bool", LogicalType::Boolean},     {"date", LogicalType::Date},
        {"timestamp", LogicalType::Timestamp}, {"numeric", LogicalType::Decimal},
        {"decimal", LogicalType::Decimal},
    };
    auto it = table.find(t);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

PromptDocument build_prompt(const ContextBundle& bundle)
{
    PromptDocument prompt;
    prompt.system_text =
        "You draft data contracts for a hub-and-spoke data platform.\n"
        "Answer with exactly one contract document in the canonical\n"
        "line-oriented format described below. No prose, no code fences.\n";
    prompt.context_text =
        render_context(bundle.metadata, bundle.rulepack, bundle.annotations);
    prompt.output_schema_descriptor =
        "document keys, in order:\n"
        "  dataset_name: dotted identifier\n"
        "  version: major.minor.patch\n"
        "  status: draft\n"
        "  owner: block with team, email (quoted strings)\n"
        "  schema: list of fields with name, type, nullable, description,\n"
        "    optional pii_class, optional rules (kind, min/max or pattern or\n"
        "    values, severity)\n"
        "  sla: block with freshness_max_age_seconds, quality_min_pass_rate\n"
        "  compliance: block with pii_fields, gdpr, optional retention_days\n"
        "  provenance: block with drafter, context_digest, drafted_at\n"
        "field types: string, integer, float, boolean, date, timestamp, decimal\n"
        "rule kinds: not_null, range, regex, enum_values, unique\n";
    return prompt;
}

std::string call_model(const PromptDocument& prompt, const ProviderConfig& config,
                       ModelTransport& transport, const Sleeper& sleep)
{
    if (config.max_retries < 0 || config.max_retries > 10) {
        throw UsageError("max_retries must lie in [0, 10]");
    }
    if (config.timeout_seconds <= 0 || config.backoff_base_seconds <= 0) {
        throw UsageError("timeout_seconds and backoff_base_seconds must be positive");
    }

    const int attempts_allowed = 1 + config.max_retries;
    for (int attempt = 0;; ++attempt) {
        try {
            return transport.complete(prompt);
        } catch (const TransportError& e) {
            if (attempt + 1 >= attempts_allowed) {
                throw TransportError(std::string("model call failed after ") +
                                         std::to_string(attempt + 1) +
                                         " attempts: " + e.what(),
                                     attempt + 1);
            }
            sleep(config.backoff_base_seconds * std::pow(2.0, attempt));
        }
    }
}

DraftResult enforce_schema(const std::string& raw, const ContextBundle& bundle,
                           ModelTransport* repair_transport,
                           const ProviderConfig* config, const Clock& clock,
                           const Sleeper& sleep)
{
    std::string current = raw;
    std::vector<ContractParseError> accumulated;

    for (int attempt = 0;; ++attempt) {
        ContractParseResult parsed = parse_contract(current);
        if (parsed.ok()) {
            DraftResult result;
            result.contract = std::move(*parsed.contract);
            result.contract.status = LifecycleState::Draft;
            result.contract.provenance.drafter = DrafterKind::Model;
            result.contract.provenance.context_digest = bundle.digest;
            result.contract.provenance.drafted_at = clock();
            result.repair_attempts = attempt;
            if (attempt > 0) {
                result.notes.push_back("accepted after " + std::to_string(attempt) +
                                       " repair round(s)");
            }
            return result;
        }

        for (const ContractParseError& e : parsed.errors) {
            accumulated.push_back(e);
        }
        if (!repair_transport || !config || attempt >= kMaxRepairAttempts) {
            throw SchemaEnforcementError(
                "draft does not satisfy the contract schema after " +
                    std::to_string(attempt) + " repair attempt(s)",
                std::move(accumulated));
        }

        PromptDocument repair = build_prompt(bundle);
        repair.context_text += "ERRORS:\n";
        for (const ContractParseError& e : parsed.errors) {
            repair.context_text +=
                "line " + std::to_string(e.line) + ": " + e.message + "\n";
        }
        current = call_model(repair, *config, *repair_transport, sleep);
    }
}

DraftResult deterministic_draft(const ContextBundle& bundle, const Clock& clock)
{
    const TableMetadata& meta = bundle.metadata;
    DraftResult result;
    DataContract& c = result.contract;

    c.dataset_name = meta.dataset_name;
    c.version = SemVer{0, 1, 0};
    c.status = LifecycleState::Draft;

    for (const ColumnInfo& col : meta.columns) {
        if (!is_identifier(col.name)) {
            throw ValidationError("catalog column is not a valid identifier: " +
                                  col.name);
        }
        auto logical = map_physical_type(col.physical_type);
        if (!logical) {
            throw ValidationError("unmappable physical type: " + col.physical_type +
                                  " (column " + col.name + ")");
        }
        FieldSpec f;
        f.name = col.name;
        f.type = *logical;
        f.nullable = col.nullable;
        f.description = col.description;
        if (!col.nullable) {
            f.rules.push_back(QualityRule{RuleKind::NotNull, std::nullopt,
                                          std::nullopt, "", {}, Severity::Error});
        }
        for (const PiiPattern& pattern : bundle.rulepack.pii_patterns) {
            if (name_matches_label(col.name, pattern.label)) {
                f.pii_class = label_class(pattern.label);
                c.compliance.pii_fields.push_back(col.name);
                result.notes.push_back("column " + col.name + " matched rulepack label " +
                                       pattern.label);
                break;
            }
        }
        c.schema.push_back(std::move(f));
    }

    c.compliance.gdpr = bundle.rulepack.gdpr_applies;
    c.compliance.retention_days = bundle.rulepack.default_retention_days;

    c.owner = OwnerSpec{"data-platform", "owner@placeholder.invalid"};
    for (const AnnotationNote& note : bundle.annotations.notes) {
        if (note.tag == AnnotationTag::SlaHint) {
            // `fresh within <N><unit>` with unit in s/m/h/d; last hint wins.
            std::string_view text = note.text;
            const std::string_view prefix = "fresh within ";
            std::size_t at = text.find(prefix);
            if (at == std::string_view::npos) continue;
            std::string_view rest = text.substr(at + prefix.size());
            std::size_t digits = 0;
            while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') {
                ++digits;
            }
            if (digits == 0 || digits == rest.size()) continue;
            auto n = parse_int(rest.substr(0, digits));
            std::int64_t unit = 0;
            switch (rest[digits]) {
            case 's': unit = 1; break;
            case 'm': unit = 60; break;
            case 'h': unit = 3600; break;
            case 'd': unit = 86400; break;
            default: break;
            }
            if (!n || unit == 0) continue;
            c.sla.freshness_max_age_seconds = *n * unit;
            result.notes.push_back("freshness set from sla_hint: " + note.text);
        } else if (note.tag == AnnotationTag::OwnerHint) {
            // `team <t> email <e>`
            std::string_view text = note.text;
            std::size_t team_at = text.find("team ");
            std::size_t email_at = text.find(" email ");
            if (team_at == std::string_view::npos ||
                email_at == std::string_view::npos || email_at <= team_at) {
                continue;
            }
            std::string team(text.substr(team_at + 5, email_at - (team_at + 5)));
            std::string email(text.substr(email_at + 7));
            while (!email.empty() && email.back() == ' ') email.pop_back();
            if (team.empty() || !is_basic_email(email)) continue;
            c.owner = OwnerSpec{team, email};
            result.notes.push_back("owner set from owner_hint: " + note.text);
        }
    }

    c.provenance.drafter = DrafterKind::Deterministic;
    c.provenance.context_digest = bundle.digest;
    c.provenance.drafted_at = clock();

    auto issues = validate(c);
    if (!issues.empty()) {
        throw ValidationError("drafted contract is invalid: " + issues.front().field +
                              ": " + issues.front().message);
    }
    return result;
}

DraftResult draft_contract(const ContextBundle& bundle, const ProviderConfig& config,
                           ModelTransport* transport, const Clock& clock,
                           const Sleeper& sleep)
{
    if (!transport) return deterministic_draft(bundle, clock);
    PromptDocument prompt = build_prompt(bundle);
    std::string raw = call_model(prompt, config, *transport, sleep);
    return enforce_schema(raw, bundle, transport, &config, clock, sleep);
}

} // namespace meshgate
