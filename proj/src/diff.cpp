// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/diff.hpp"

#include "meshgate/errors.hpp"

#include <algorithm>
#include <set>

namespace meshgate {

std::string_view to_string(ChangeKind k)
{
    switch (k) {
    case ChangeKind::FieldAdded: return "field_added";
    case ChangeKind::FieldRemoved: return "field_removed";
    case ChangeKind::TypeChanged: return "type_changed";
    case ChangeKind::NullableLoosened: return "nullable_loosened";
    case ChangeKind::NullableTightened: return "nullable_tightened";
    case ChangeKind::RuleAdded: return "rule_added";
    case ChangeKind::RuleRemoved: return "rule_removed";
    case ChangeKind::RuleLoosened: return "rule_loosened";
    case ChangeKind::RuleTightened: return "rule_tightened";
    case ChangeKind::RuleChanged: return "rule_changed";
    case ChangeKind::SlaLoosened: return "sla_loosened";
    case ChangeKind::SlaTightened: return "sla_tightened";
    case ChangeKind::ComplianceChanged: return "compliance_changed";
    case ChangeKind::PiiClassChanged: return "pii_class_changed";
    case ChangeKind::DescriptionChanged: return "description_changed";
    case ChangeKind::OwnerChanged: return "owner_changed";
    case ChangeKind::FieldReordered: return "field_reordered";
    }
    return "?";
}

std::string_view to_string(Classification c)
{
    switch (c) {
    case Classification::Compatible: return "compatible";
    case Classification::Risky: return "risky";
    case Classification::Breaking: return "breaking";
    }
    return "?";
}

Classification classify(ChangeKind k)
{
    switch (k) {
    case ChangeKind::FieldRemoved:
    case ChangeKind::TypeChanged:
    case ChangeKind::NullableLoosened:
        return Classification::Breaking;
    case ChangeKind::RuleRemoved:
    case ChangeKind::RuleLoosened:
    case ChangeKind::RuleChanged:
    case ChangeKind::SlaLoosened:
        return Classification::Risky;
    default:
        return Classification::Compatible;
    }
}

bool is_metadata_change(ChangeKind k)
{
    return k == ChangeKind::DescriptionChanged || k == ChangeKind::OwnerChanged ||
           k == ChangeKind::FieldReordered;
}

namespace {

void add_change(CompatibilityReport& report, std::string path, ChangeKind kind,
                std::string detail)
{
    Classification cls = classify(kind);
    report.changes.push_back({std::move(path), kind, cls, std::move(detail)});
    if (static_cast<int>(cls) > static_cast<int>(report.verdict)) {
        report.verdict = cls;
    }
}

const QualityRule* rule_of_kind(const FieldSpec& f, RuleKind kind)
{
    for (const QualityRule& r : f.rules) {
        if (r.kind == kind) return &r;
    }
    return nullptr;
}

// -1 when `a` is the looser bound set (allows values `b` forbids), +1 when
// strictly tighter, 0 when equal, 2 when loosened on one side and tightened
// on the other.
int compare_ranges(const QualityRule& a, const QualityRule& b)
{
    const bool loosens_low = b.min && (!a.min || *a.min < *b.min);
    const bool loosens_high = b.max && (!a.max || *a.max > *b.max);
    const bool tightens_low = a.min && (!b.min || *a.min > *b.min);
    const bool tightens_high = a.max && (!b.max || *a.max < *b.max);
    const bool loosens = loosens_low || loosens_high;
    const bool tightens = tightens_low || tightens_high;
    if (loosens && tightens) return 2;
    if (loosens) return -1;
    if (tightens) return 1;
    return 0;
}

void diff_rule(CompatibilityReport& report, const std::string& path,
               const QualityRule& old_rule, const QualityRule& new_rule)
{
    bool loosened = false;
    bool tightened = false;

    switch (old_rule.kind) {
    case RuleKind::Range: {
        int c = compare_ranges(new_rule, old_rule);
        if (c == -1 || c == 2) loosened = true;
        else if (c == 1) tightened = true;
        break;
    }
    case RuleKind::EnumValues: {
        const std::set<std::string> old_set(old_rule.values.begin(),
                                            old_rule.values.end());
        const std::set<std::string> new_set(new_rule.values.begin(),
                                            new_rule.values.end());
        for (const std::string& v : new_set) {
            if (!old_set.count(v)) loosened = true;
        }
        for (const std::string& v : old_set) {
            if (!new_set.count(v)) tightened = true;
        }
        if (loosened) tightened = false;
        break;
    }
    case RuleKind::Regex:
        if (old_rule.pattern != new_rule.pattern) {
            add_change(report, path, ChangeKind::RuleChanged, "pattern rewritten");
            return;
        }
        break;
    case RuleKind::NotNull:
    case RuleKind::Unique:
        break;
    }

    if (old_rule.severity == Severity::Error && new_rule.severity == Severity::Warn) {
        loosened = true;
    } else if (old_rule.severity == Severity::Warn &&
               new_rule.severity == Severity::Error) {
        tightened = true;
    }

    if (loosened) {
        add_change(report, path, ChangeKind::RuleLoosened, "guarantee weakened");
    } else if (tightened) {
        add_change(report, path, ChangeKind::RuleTightened, "guarantee strengthened");
    }
}

void diff_field(CompatibilityReport& report, const FieldSpec& old_field,
                const FieldSpec& new_field)
{
    const std::string base = "schema." + old_field.name;

    if (old_field.type != new_field.type) {
        add_change(report, base + ".type", ChangeKind::TypeChanged,
                   std::string(to_string(old_field.type)) + " -> " +
                       std::string(to_string(new_field.type)));
        return; // rules are meaningless across a retype
    }
    if (!old_field.nullable && new_field.nullable) {
        add_change(report, base + ".nullable", ChangeKind::NullableLoosened,
                   "false -> true");
    } else if (old_field.nullable && !new_field.nullable) {
        add_change(report, base + ".nullable", ChangeKind::NullableTightened,
                   "true -> false");
    }
    if (old_field.description != new_field.description) {
        add_change(report, base + ".description", ChangeKind::DescriptionChanged, "");
    }
    if (old_field.pii_class != new_field.pii_class) {
        add_change(report, base + ".pii_class", ChangeKind::PiiClassChanged, "");
    }

    for (const QualityRule& old_rule : old_field.rules) {
        const std::string path =
            base + ".rules[" + std::string(to_string(old_rule.kind)) + "]";
        const QualityRule* new_rule = rule_of_kind(new_field, old_rule.kind);
        if (!new_rule) {
            add_change(report, path, ChangeKind::RuleRemoved, "");
        } else {
            diff_rule(report, path, old_rule, *new_rule);
        }
    }
    for (const QualityRule& new_rule : new_field.rules) {
        if (!rule_of_kind(old_field, new_rule.kind)) {
            add_change(report,
                       base + ".rules[" + std::string(to_string(new_rule.kind)) + "]",
                       ChangeKind::RuleAdded, "");
        }
    }
}

std::vector<std::string> pii_set(const DataContract& c)
{
    std::vector<std::string> v = c.compliance.pii_fields;
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

CompatibilityReport diff(const DataContract& old_contract,
                         const DataContract& new_contract)
{
    if (old_contract.dataset_name != new_contract.dataset_name) {
        throw UsageError("diff requires matching dataset names: " +
                         old_contract.dataset_name + " vs " +
                         new_contract.dataset_name);
    }

    CompatibilityReport report;

    for (const FieldSpec& old_field : old_contract.schema) {
        const FieldSpec* new_field = new_contract.find_field(old_field.name);
        if (!new_field) {
            add_change(report, "schema." + old_field.name, ChangeKind::FieldRemoved,
                       "");
        } else {
            diff_field(report, old_field, *new_field);
        }
    }
    for (const FieldSpec& new_field : new_contract.schema) {
        if (!old_contract.find_field(new_field.name)) {
            add_change(report, "schema." + new_field.name, ChangeKind::FieldAdded, "");
        }
    }

    // Relative order of the fields both versions share.
    std::vector<std::string> old_common;
    std::vector<std::string> new_common;
    for (const FieldSpec& f : old_contract.schema) {
        if (new_contract.find_field(f.name)) old_common.push_back(f.name);
    }
    for (const FieldSpec& f : new_contract.schema) {
        if (old_contract.find_field(f.name)) new_common.push_back(f.name);
    }
    if (old_common != new_common) {
        add_change(report, "schema", ChangeKind::FieldReordered, "");
    }

    if (new_contract.sla.freshness_max_age_seconds >
        old_contract.sla.freshness_max_age_seconds) {
        add_change(report, "sla.freshness_max_age_seconds", ChangeKind::SlaLoosened,
                   "");
    } else if (new_contract.sla.freshness_max_age_seconds <
               old_contract.sla.freshness_max_age_seconds) {
        add_change(report, "sla.freshness_max_age_seconds", ChangeKind::SlaTightened,
                   "");
    }
    if (new_contract.sla.quality_min_pass_rate <
        old_contract.sla.quality_min_pass_rate) {
        add_change(report, "sla.quality_min_pass_rate", ChangeKind::SlaLoosened, "");
    } else if (new_contract.sla.quality_min_pass_rate >
               old_contract.sla.quality_min_pass_rate) {
        add_change(report, "sla.quality_min_pass_rate", ChangeKind::SlaTightened, "");
    }

    if (pii_set(old_contract) != pii_set(new_contract)) {
        add_change(report, "compliance.pii_fields", ChangeKind::ComplianceChanged, "");
    }
    if (old_contract.compliance.gdpr != new_contract.compliance.gdpr) {
        add_change(report, "compliance.gdpr", ChangeKind::ComplianceChanged, "");
    }
    if (old_contract.compliance.retention_days !=
        new_contract.compliance.retention_days) {
        add_change(report, "compliance.retention_days", ChangeKind::ComplianceChanged,
                   "");
    }

    if (old_contract.owner != new_contract.owner) {
        add_change(report, "owner", ChangeKind::OwnerChanged, "");
    }

    return report;
}

SemVer next_version(const std::optional<SemVer>& old_version,
                    const CompatibilityReport& report)
{
    if (!old_version) return SemVer{1, 0, 0};
    if (report.verdict == Classification::Breaking) {
        return SemVer{old_version->major + 1, 0, 0};
    }
    const bool structural = std::any_of(
        report.changes.begin(), report.changes.end(),
        [](const ContractChange& c) { return !is_metadata_change(c.kind); });
    if (structural || report.verdict == Classification::Risky) {
        return SemVer{old_version->major, old_version->minor + 1, 0};
    }
    return SemVer{old_version->major, old_version->minor, old_version->patch + 1};
}

} // namespace meshgate
