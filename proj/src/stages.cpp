// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/stages.hpp"

#include "meshgate/contract.hpp"

namespace meshgate {

std::string_view to_string(MaturityStage s)
{
    switch (s) {
    case MaturityStage::Foundation: return "foundation";
    case MaturityStage::Enablement: return "enablement";
    case MaturityStage::Delegation: return "delegation";
    case MaturityStage::FederatedOptimization: return "federated_optimization";
    }
    return "?";
}

std::string_view to_string(GovernanceGate g)
{
    switch (g) {
    case GovernanceGate::ContractApproval: return "contract_approval";
    case GovernanceGate::QualityThresholds: return "quality_thresholds";
    case GovernanceGate::ReleaseCadence: return "release_cadence";
    case GovernanceGate::SchemaDiffBlocking: return "schema_diff_blocking";
    case GovernanceGate::PiiRouting: return "pii_routing";
    }
    return "?";
}

std::string_view to_string(EnforcementLevel l)
{
    switch (l) {
    case EnforcementLevel::HubMandatory: return "hub_mandatory";
    case EnforcementLevel::SpokeConfigurable: return "spoke_configurable";
    case EnforcementLevel::Advisory: return "advisory";
    }
    return "?";
}

std::string_view to_string(GateOutcome o)
{
    return o == GateOutcome::BlockOnFail ? "block_on_fail" : "warn_on_fail";
}

std::optional<MaturityStage> maturity_stage_from(std::string_view name)
{
    for (MaturityStage s : kStageOrder) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

ResponsibilityShare stage_share(MaturityStage stage)
{
    switch (stage) {
    case MaturityStage::Foundation: return {0.80, 0.20};
    case MaturityStage::Enablement: return {0.60, 0.40};
    case MaturityStage::Delegation: return {0.40, 0.60};
    case MaturityStage::FederatedOptimization: return {0.25, 0.75};
    }
    return {0, 0};
}

PolicyProfile stage_profile(MaturityStage stage)
{
    auto level_of = [&](GovernanceGate gate) {
        switch (gate) {
        case GovernanceGate::ContractApproval:
        case GovernanceGate::PiiRouting:
            return EnforcementLevel::HubMandatory;
        case GovernanceGate::ReleaseCadence:
            return stage == MaturityStage::Foundation
                       ? EnforcementLevel::HubMandatory
                       : EnforcementLevel::SpokeConfigurable;
        case GovernanceGate::QualityThresholds:
            return (stage == MaturityStage::Delegation ||
                    stage == MaturityStage::FederatedOptimization)
                       ? EnforcementLevel::SpokeConfigurable
                       : EnforcementLevel::HubMandatory;
        case GovernanceGate::SchemaDiffBlocking:
            return stage == MaturityStage::FederatedOptimization
                       ? EnforcementLevel::Advisory
                       : EnforcementLevel::HubMandatory;
        }
        return EnforcementLevel::HubMandatory;
    };

    PolicyProfile profile;
    for (GovernanceGate gate : kAllGates) {
        profile.levels[static_cast<std::size_t>(gate)] = level_of(gate);
    }
    return profile;
}

GateOutcome gate_decision(MaturityStage stage, GovernanceGate gate,
                          bool local_override_present)
{
    switch (stage_profile(stage).level(gate)) {
    case EnforcementLevel::HubMandatory:
        return GateOutcome::BlockOnFail;
    case EnforcementLevel::SpokeConfigurable:
        return local_override_present ? GateOutcome::WarnOnFail
                                      : GateOutcome::BlockOnFail;
    case EnforcementLevel::Advisory:
        return GateOutcome::WarnOnFail;
    }
    return GateOutcome::BlockOnFail;
}

std::string render_stage_profile(MaturityStage stage)
{
    const ResponsibilityShare share = stage_share(stage);
    const PolicyProfile profile = stage_profile(stage);

    std::string out;
    out += "stage\t" + std::string(to_string(stage)) + "\n";
    out += "hub_share\t" + format_double(share.hub) + "\n";
    out += "spoke_share\t" + format_double(share.spoke) + "\n";
    for (GovernanceGate gate : kAllGates) {
        out += std::string(to_string(gate)) + "\t" +
               std::string(to_string(profile.level(gate))) + "\n";
    }
    return out;
}

} // namespace meshgate
