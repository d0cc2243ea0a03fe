// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/contract.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshgate {

// Contract-version compatibility analysis. Direction matters: changes are
// classified from the consumer's point of view reading `old` and being
// handed `new`.

enum class ChangeKind {
    FieldAdded,
    FieldRemoved,
    TypeChanged,
    NullableLoosened,  // false -> true
    NullableTightened, // true -> false
    RuleAdded,
    RuleRemoved,
    RuleLoosened,
    RuleTightened,
    RuleChanged, // rewritten in a way we cannot order, e.g. regex pattern
    SlaLoosened,
    SlaTightened,
    ComplianceChanged,
    PiiClassChanged,
    DescriptionChanged,
    OwnerChanged,
    FieldReordered,
};

enum class Classification { Compatible, Risky, Breaking };

std::string_view to_string(ChangeKind k);
std::string_view to_string(Classification c);

/// Fixed kind -> classification table. Breaking: removals, retyping,
/// nullable loosening. Risky: guarantee loosening (rules, SLA). Everything
/// else is compatible.
Classification classify(ChangeKind k);

/// True for changes that only touch documentation-grade content
/// (descriptions, owner, field order); these bump the patch component.
bool is_metadata_change(ChangeKind k);

struct ContractChange {
    std::string path; // e.g. "schema.amount.rules[range]"
    ChangeKind kind = ChangeKind::DescriptionChanged;
    Classification classification = Classification::Compatible;
    std::string detail;
};

struct CompatibilityReport {
    std::vector<ContractChange> changes;
    Classification verdict = Classification::Compatible;
};

/// Field-level diff of two versions of the same dataset's contract.
/// Provenance, version, and status are not compared. Throws UsageError on
/// dataset_name mismatch.
CompatibilityReport diff(const DataContract& old_contract,
                         const DataContract& new_contract);

/// breaking -> major+1.0.0; any non-metadata change -> minor+1.0;
/// otherwise patch+1. No prior version -> 1.0.0.
SemVer next_version(const std::optional<SemVer>& old_version,
                    const CompatibilityReport& report);

} // namespace meshgate
