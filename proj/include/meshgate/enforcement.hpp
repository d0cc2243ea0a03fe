// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/contract.hpp"
#include "meshgate/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace meshgate {

// Run-time contract enforcement: schema conformance, quality rules, and
// freshness over a sampled dataset.

/// One cell: null, boolean, integer, float, or string.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

/// Ordered by column name so reports are deterministic.
using Row = std::map<std::string, Cell>;

struct DatasetSample {
    std::string dataset_name;
    std::vector<Row> rows; // all rows share one column set
    UtcSeconds last_updated{};
};

enum class SchemaIssue { Missing, Extra, TypeMismatch, NullViolation };

std::string_view to_string(SchemaIssue i);

struct SchemaFinding {
    std::string column;
    SchemaIssue issue = SchemaIssue::Missing;

    bool operator==(const SchemaFinding&) const = default;
};

struct RuleFinding {
    std::string field;
    RuleKind kind = RuleKind::NotNull;
    std::vector<std::size_t> failing_rows;
    Severity severity = Severity::Error;
};

struct FreshnessResult {
    std::int64_t age_seconds = 0;
    std::int64_t limit_seconds = 0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<SchemaFinding> schema_findings;
    std::vector<RuleFinding> rule_findings;
    FreshnessResult freshness;
    double pass_rate = 1.0; // rows violating no error-severity rule
    bool verdict = true;
};

/// Inclusive bound: age == limit passes. Throws ClockSkewError when `now`
/// precedes `last_updated`.
FreshnessResult check_freshness(const DataContract& contract, UtcSeconds last_updated,
                                UtcSeconds now);

/// Checks presence, type conformance, and nullability per contract field,
/// evaluates every quality rule row-wise, and folds in freshness. A zero-row
/// sample passes vacuously except for freshness. Throws UsageError on
/// dataset_name mismatch.
ValidationReport validate_dataset(const DataContract& contract,
                                  const DatasetSample& sample, UtcSeconds now);

/// True when the cell's runtime type conforms to the declared logical type.
/// Null cells conform to every type (nullability is checked separately).
bool cell_conforms(const Cell& cell, LogicalType type);

/// Numeric view used by range rules: numbers as-is, dates as days * 86400,
/// timestamps as epoch seconds. nullopt for nulls and non-conforming cells.
std::optional<double> cell_numeric(const Cell& cell, LogicalType type);

/// Parses a line-delimited sample file: one record object per line, `#`
/// comment lines, plus optional `# last_updated: <ISO>` and `# dataset:
/// <name>` sidecar lines. Throws UsageError with a line reference.
DatasetSample load_sample(const std::string& text, const std::string& source_name);

} // namespace meshgate
