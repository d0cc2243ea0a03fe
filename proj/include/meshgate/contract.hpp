// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/time.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshgate {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class LogicalType { String, Integer, Float, Boolean, Date, Timestamp, Decimal };

enum class RuleKind { NotNull, Range, Regex, EnumValues, Unique };

enum class Severity { Error, Warn };

enum class PiiClass { None, DirectIdentifier, QuasiIdentifier, Financial };

enum class LifecycleState { Draft, PendingReview, Approved, Rejected, Superseded };

enum class DrafterKind { Deterministic, Model };

struct SemVer {
    int major = 0;
    int minor = 0;
    int patch = 0;

    auto operator<=>(const SemVer&) const = default;

    static std::optional<SemVer> parse(std::string_view text);
    std::string str() const;
};

struct QualityRule {
    RuleKind kind = RuleKind::NotNull;
    std::optional<double> min;          // range
    std::optional<double> max;          // range
    std::string pattern;                // regex
    std::vector<std::string> values;    // enum_values
    Severity severity = Severity::Error;

    bool operator==(const QualityRule&) const = default;
};

struct FieldSpec {
    std::string name;
    LogicalType type = LogicalType::String;
    bool nullable = true;
    std::string description;
    std::optional<PiiClass> pii_class;
    std::vector<QualityRule> rules;

    bool operator==(const FieldSpec&) const = default;
};

struct SlaSpec {
    std::int64_t freshness_max_age_seconds = 86400;
    double quality_min_pass_rate = 0.99;

    bool operator==(const SlaSpec&) const = default;
};

struct ComplianceSpec {
    std::vector<std::string> pii_fields;
    bool gdpr = false;
    std::optional<std::int64_t> retention_days;

    bool operator==(const ComplianceSpec&) const = default;
};

struct OwnerSpec {
    std::string team;
    std::string email;

    bool operator==(const OwnerSpec&) const = default;
};

struct ProvenanceStamp {
    DrafterKind drafter = DrafterKind::Deterministic;
    std::string context_digest = std::string(64, '0');
    UtcSeconds drafted_at{};

    bool operator==(const ProvenanceStamp&) const = default;
};

struct DataContract {
    std::string dataset_name;
    SemVer version;
    LifecycleState status = LifecycleState::Draft;
    OwnerSpec owner;
    std::vector<FieldSpec> schema;
    SlaSpec sla;
    ComplianceSpec compliance;
    ProvenanceStamp provenance;

    bool operator==(const DataContract&) const = default;

    const FieldSpec* find_field(std::string_view name) const;
};

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

std::string_view to_string(LogicalType t);
std::string_view to_string(RuleKind k);
std::string_view to_string(Severity s);
std::string_view to_string(PiiClass c);
std::string_view to_string(LifecycleState s);
std::string_view to_string(DrafterKind d);

std::optional<LogicalType> logical_type_from(std::string_view name);
std::optional<RuleKind> rule_kind_from(std::string_view name);
std::optional<Severity> severity_from(std::string_view name);
std::optional<PiiClass> pii_class_from(std::string_view name);
std::optional<LifecycleState> lifecycle_state_from(std::string_view name);
std::optional<DrafterKind> drafter_kind_from(std::string_view name);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    std::string field;   // dotted path, e.g. "schema[1].rules[0]"
    std::string message;
};

/// Checks every type invariant; empty result means the contract is valid.
std::vector<ValidationIssue> validate(const DataContract& contract);

/// Lowercase dotted identifier: `[a-z][a-z0-9_]*(\.[a-z][a-z0-9_]*)*`.
bool is_identifier(std::string_view s);

/// Basic `local@domain.tld` shape with exactly one `@`.
bool is_basic_email(std::string_view s);

/// True when `kind` may appear on a field of type `type`.
bool rule_applies_to(RuleKind kind, LogicalType type);

/// Legal lifecycle transitions only.
bool legal_transition(LifecycleState from, LifecycleState to);

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

/// Canonical plain-text document: fixed key order, schema fields in declared
/// order, LF line endings. Throws ValidationError when invariants fail.
std::string serialize(const DataContract& contract);

struct ContractParseError {
    int line = 0;
    std::string message;
};

struct ContractParseResult {
    std::optional<DataContract> contract;
    std::vector<ContractParseError> errors;

    bool ok() const { return contract.has_value() && errors.empty(); }
};

/// Strict closed-schema parse; unknown keys are rejected. Never throws.
ContractParseResult parse_contract(std::string_view document);

/// SHA-256 of the canonical serialization, 64 hex chars.
std::string content_digest(const DataContract& contract);

// Canonical scalar formatting shared by other modules.
std::string format_double(double v);
std::optional<double> parse_double(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

} // namespace meshgate
