// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace meshgate {

// Maturity stages and the hub/spoke responsibility split. Stage profiles
// decide how strictly each governance gate is enforced; the shares are
// descriptive constants surfaced in reports.

enum class MaturityStage { Foundation, Enablement, Delegation, FederatedOptimization };

enum class GovernanceGate {
    ContractApproval,
    QualityThresholds,
    ReleaseCadence,
    SchemaDiffBlocking,
    PiiRouting,
};

enum class EnforcementLevel { HubMandatory, SpokeConfigurable, Advisory };

enum class GateOutcome { BlockOnFail, WarnOnFail };

inline constexpr std::array<MaturityStage, 4> kStageOrder = {
    MaturityStage::Foundation,
    MaturityStage::Enablement,
    MaturityStage::Delegation,
    MaturityStage::FederatedOptimization,
};

inline constexpr std::array<GovernanceGate, 5> kAllGates = {
    GovernanceGate::ContractApproval,  GovernanceGate::QualityThresholds,
    GovernanceGate::ReleaseCadence,    GovernanceGate::SchemaDiffBlocking,
    GovernanceGate::PiiRouting,
};

std::string_view to_string(MaturityStage s);
std::string_view to_string(GovernanceGate g);
std::string_view to_string(EnforcementLevel l);
std::string_view to_string(GateOutcome o);

std::optional<MaturityStage> maturity_stage_from(std::string_view name);

struct ResponsibilityShare {
    double hub = 0;
    double spoke = 0;
};

/// Fixed per stage: 0.80/0.20, 0.60/0.40, 0.40/0.60, 0.25/0.75.
ResponsibilityShare stage_share(MaturityStage stage);

struct PolicyProfile {
    std::array<EnforcementLevel, kAllGates.size()> levels{};

    EnforcementLevel level(GovernanceGate gate) const
    {
        return levels[static_cast<std::size_t>(gate)];
    }
};

/// Contract approval and PII routing stay hub-mandatory everywhere. Release
/// cadence opens up at enablement, quality thresholds at delegation, and
/// schema-diff blocking relaxes to advisory at federated optimization.
PolicyProfile stage_profile(MaturityStage stage);

/// hub_mandatory blocks regardless of overrides; spoke_configurable honors
/// a local override; advisory always warns.
GateOutcome gate_decision(MaturityStage stage, GovernanceGate gate,
                          bool local_override_present);

/// Human-readable profile listing for the CLI stage command.
std::string render_stage_profile(MaturityStage stage);

} // namespace meshgate
