// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/enforcement.hpp"

#include "meshgate/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <set>

namespace meshgate {

std::string_view to_string(SchemaIssue i)
{
    switch (i) {
    case SchemaIssue::Missing: return "missing";
    case SchemaIssue::Extra: return "extra";
    case SchemaIssue::TypeMismatch: return "type_mismatch";
    case SchemaIssue::NullViolation: return "null_violation";
    }
    return "?";
}

FreshnessResult check_freshness(const DataContract& contract, UtcSeconds last_updated,
                                UtcSeconds now)
{
    if (now < last_updated) {
        throw ClockSkewError("evaluation time " + format_utc(now) +
                             " precedes data timestamp " + format_utc(last_updated));
    }
    FreshnessResult r;
    r.age_seconds = (now - last_updated).count();
    r.limit_seconds = contract.sla.freshness_max_age_seconds;
    r.pass = r.age_seconds <= r.limit_seconds;
    return r;
}

bool cell_conforms(const Cell& cell, LogicalType type)
{
    if (std::holds_alternative<std::monostate>(cell)) return true;
    switch (type) {
    case LogicalType::String:
        return std::holds_alternative<std::string>(cell);
    case LogicalType::Boolean:
        return std::holds_alternative<bool>(cell);
    case LogicalType::Integer:
        if (std::holds_alternative<std::int64_t>(cell)) return true;
        if (const double* d = std::get_if<double>(&cell)) {
            return std::isfinite(*d) && std::floor(*d) == *d &&
                   std::abs(*d) <= 9.0e15;
        }
        return false;
    case LogicalType::Float:
    case LogicalType::Decimal:
        if (std::holds_alternative<std::int64_t>(cell)) return true;
        if (const double* d = std::get_if<double>(&cell)) return std::isfinite(*d);
        return false;
    case LogicalType::Date:
        if (const std::string* s = std::get_if<std::string>(&cell)) {
            return parse_civil_date(*s).has_value();
        }
        return false;
    case LogicalType::Timestamp:
        if (const std::string* s = std::get_if<std::string>(&cell)) {
            return parse_utc(*s).has_value();
        }
        return false;
    }
    return false;
}

std::optional<double> cell_numeric(const Cell& cell, LogicalType type)
{
    if (std::holds_alternative<std::monostate>(cell) || !cell_conforms(cell, type)) {
        return std::nullopt;
    }
    switch (type) {
    case LogicalType::Integer:
    case LogicalType::Float:
    case LogicalType::Decimal:
        if (const std::int64_t* i = std::get_if<std::int64_t>(&cell)) {
            return static_cast<double>(*i);
        }
        return std::get<double>(cell);
    case LogicalType::Date:
        return static_cast<double>(*parse_civil_date(std::get<std::string>(cell))) *
               86400.0;
    case LogicalType::Timestamp:
        return static_cast<double>(
            parse_utc(std::get<std::string>(cell))->time_since_epoch().count());
    default:
        return std::nullopt;
    }
}

namespace {

bool is_null(const Cell& cell)
{
    return std::holds_alternative<std::monostate>(cell);
}

// Stable key for duplicate grouping under the unique rule.
std::string cell_key(const Cell& cell)
{
    if (const bool* b = std::get_if<bool>(&cell)) return *b ? "b:true" : "b:false";
    if (const std::int64_t* i = std::get_if<std::int64_t>(&cell)) {
        return "n:" + format_double(static_cast<double>(*i));
    }
    if (const double* d = std::get_if<double>(&cell)) return "n:" + format_double(*d);
    if (const std::string* s = std::get_if<std::string>(&cell)) return "s:" + *s;
    return "null";
}

std::vector<std::size_t> evaluate_rule(const QualityRule& rule, const FieldSpec& field,
                                       const std::vector<Row>& rows)
{
    std::vector<std::size_t> failing;
    switch (rule.kind) {
    case RuleKind::NotNull:
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(field.name);
            if (it == rows[i].end() || is_null(it->second)) failing.push_back(i);
        }
        break;
    case RuleKind::Range:
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(field.name);
            if (it == rows[i].end()) continue;
            auto v = cell_numeric(it->second, field.type);
            if (!v) continue;
            if ((rule.min && *v < *rule.min) || (rule.max && *v > *rule.max)) {
                failing.push_back(i);
            }
        }
        break;
    case RuleKind::Regex: {
        const std::regex re(rule.pattern);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(field.name);
            if (it == rows[i].end()) continue;
            const std::string* s = std::get_if<std::string>(&it->second);
            if (!s) continue;
            if (!std::regex_match(*s, re)) failing.push_back(i);
        }
        break;
    }
    case RuleKind::EnumValues:
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(field.name);
            if (it == rows[i].end()) continue;
            const std::string* s = std::get_if<std::string>(&it->second);
            if (!s) continue;
            if (std::find(rule.values.begin(), rule.values.end(), *s) ==
                rule.values.end()) {
                failing.push_back(i);
            }
        }
        break;
    case RuleKind::Unique: {
        std::map<std::string, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(field.name);
            if (it == rows[i].end() || is_null(it->second)) continue;
            if (!cell_conforms(it->second, field.type)) continue;
            groups[cell_key(it->second)].push_back(i);
        }
        for (const auto& [key, members] : groups) {
            if (members.size() > 1) {
                failing.insert(failing.end(), members.begin(), members.end());
            }
        }
        std::sort(failing.begin(), failing.end());
        break;
    }
    }
    return failing;
}

} // namespace

ValidationReport validate_dataset(const DataContract& contract,
                                  const DatasetSample& sample, UtcSeconds now)
{
    if (contract.dataset_name != sample.dataset_name) {
        throw UsageError("sample dataset " + sample.dataset_name +
                         " does not match contract " + contract.dataset_name);
    }

    ValidationReport report;
    report.freshness = check_freshness(contract, sample.last_updated, now);

    if (!sample.rows.empty()) {
        std::set<std::string> columns;
        for (const auto& [name, cell] : sample.rows.front()) columns.insert(name);

        for (const FieldSpec& field : contract.schema) {
            if (!columns.count(field.name)) {
                report.schema_findings.push_back({field.name, SchemaIssue::Missing});
            }
        }
        for (const std::string& column : columns) {
            if (!contract.find_field(column)) {
                report.schema_findings.push_back({column, SchemaIssue::Extra});
            }
        }

        for (const FieldSpec& field : contract.schema) {
            if (!columns.count(field.name)) continue;
            bool null_violation = false;
            bool type_mismatch = false;
            for (const Row& row : sample.rows) {
                const Cell& cell = row.at(field.name);
                if (is_null(cell)) {
                    if (!field.nullable) null_violation = true;
                } else if (!cell_conforms(cell, field.type)) {
                    type_mismatch = true;
                }
            }
            if (type_mismatch) {
                report.schema_findings.push_back({field.name, SchemaIssue::TypeMismatch});
            }
            if (null_violation) {
                report.schema_findings.push_back(
                    {field.name, SchemaIssue::NullViolation});
            }
        }

        std::set<std::size_t> failing_rows;
        for (const FieldSpec& field : contract.schema) {
            if (!columns.count(field.name)) continue;
            for (const QualityRule& rule : field.rules) {
                auto failing = evaluate_rule(rule, field, sample.rows);
                if (failing.empty()) continue;
                if (rule.severity == Severity::Error) {
                    failing_rows.insert(failing.begin(), failing.end());
                }
                report.rule_findings.push_back(
                    {field.name, rule.kind, std::move(failing), rule.severity});
            }
        }
        report.pass_rate = 1.0 - static_cast<double>(failing_rows.size()) /
                                     static_cast<double>(sample.rows.size());
    }

    report.verdict = report.schema_findings.empty() &&
                     report.pass_rate >= contract.sla.quality_min_pass_rate &&
                     report.freshness.pass;
    return report;
}

DatasetSample load_sample(const std::string& text, const std::string& source_name)
{
    DatasetSample sample;
    std::optional<UtcSeconds> last_updated;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto fail = [&](const std::string& msg) -> void {
            throw UsageError(source_name + ":" + std::to_string(line_no) + ": " + msg);
        };

        if (line.front() == '#') {
            std::string body = line.substr(1);
            std::size_t start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            const std::string lu = "last_updated:";
            const std::string ds = "dataset:";
            if (body.rfind(lu, 0) == 0) {
                std::string value = body.substr(lu.size());
                std::size_t vs = value.find_first_not_of(' ');
                if (vs == std::string::npos) fail("last_updated needs a timestamp");
                auto t = parse_utc(value.substr(vs));
                if (!t) fail("last_updated must be an ISO-8601 UTC timestamp");
                last_updated = *t;
            } else if (body.rfind(ds, 0) == 0) {
                std::string value = body.substr(ds.size());
                std::size_t vs = value.find_first_not_of(' ');
                if (vs == std::string::npos) fail("dataset needs a name");
                sample.dataset_name = value.substr(vs);
            }
            continue;
        }

        nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) {
            fail("expected one record object per line");
        }
        Row row;
        for (const auto& [key, value] : parsed.items()) {
            Cell cell;
            if (value.is_null()) cell = std::monostate{};
            else if (value.is_boolean()) cell = value.get<bool>();
            // unsigned first: is_number_integer() is also true for unsigned
            else if (value.is_number_unsigned()) {
                auto u = value.get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(
                            std::numeric_limits<std::int64_t>::max())) {
                    cell = static_cast<double>(u);
                } else {
                    cell = static_cast<std::int64_t>(u);
                }
            } else if (value.is_number_integer()) cell = value.get<std::int64_t>();
            else if (value.is_number_float()) cell = value.get<double>();
            else if (value.is_string()) cell = value.get<std::string>();
            else fail("cell " + key + " must be a scalar or null");
            row.emplace(key, std::move(cell));
        }
        if (!sample.rows.empty()) {
            const Row& first = sample.rows.front();
            bool same = row.size() == first.size() &&
                        std::equal(row.begin(), row.end(), first.begin(),
                                   [](const auto& a, const auto& b) {
                                       return a.first == b.first;
                                   });
            if (!same) fail("row columns differ from the first row");
        }
        sample.rows.push_back(std::move(row));
    }

    if (last_updated) sample.last_updated = *last_updated;
    return sample;
}

} // namespace meshgate
