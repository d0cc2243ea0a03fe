// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/context.hpp"
#include "meshgate/contract.hpp"
#include "meshgate/errors.hpp"
#include "meshgate/time.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace meshgate {

// Contract drafting: a deterministic offline drafter plus a model-backed
// pipeline (prompt builder, retrying caller, schema enforcer) behind a
// transport seam so tests stay hermetic.

struct PromptDocument {
    std::string system_text;
    std::string context_text;
    std::string output_schema_descriptor;

    bool operator==(const PromptDocument&) const = default;
};

struct ProviderConfig {
    std::string endpoint;
    int max_retries = 2;          // <= 10
    double timeout_seconds = 30;  // > 0
    double backoff_base_seconds = 0.5;
};

struct DraftResult {
    DataContract contract; // status == draft, provenance filled
    int repair_attempts = 0;
    std::vector<std::string> notes;
};

/// One model invocation. Implementations throw TransportError on transient
/// failure (timeouts included); call_model owns the retry policy.
class ModelTransport {
public:
    virtual ~ModelTransport() = default;
    virtual std::string complete(const PromptDocument& prompt) = 0;
};

/// Injectable delay so retry tests run instantly.
using Sleeper = std::function<void(double seconds)>;

Sleeper real_sleeper();

/// The raw draft could not be shaped into a valid contract within the
/// repair budget.
class SchemaEnforcementError : public Error {
public:
    SchemaEnforcementError(const std::string& msg,
                           std::vector<ContractParseError> errors)
        : Error(msg), errors_(std::move(errors)) {}

    const std::vector<ContractParseError>& errors() const { return errors_; }

private:
    std::vector<ContractParseError> errors_;
};

/// Deterministic given the bundle; context_text carries every column and
/// annotation verbatim.
PromptDocument build_prompt(const ContextBundle& bundle);

/// Retries transient failures up to max_retries with exponential backoff
/// (base * 2^failed_attempts). Throws TransportError carrying the total
/// attempt count once retries are exhausted.
std::string call_model(const PromptDocument& prompt, const ProviderConfig& config,
                       ModelTransport& transport, const Sleeper& sleep = real_sleeper());

constexpr int kMaxRepairAttempts = 2;

/// Parses raw model output as a contract document. On parse failure, when a
/// transport is supplied, re-prompts with the error list up to
/// kMaxRepairAttempts times; otherwise fails immediately. The returned
/// contract always has status=draft and provenance stamped from the bundle.
DraftResult enforce_schema(const std::string& raw, const ContextBundle& bundle,
                           ModelTransport* repair_transport,
                           const ProviderConfig* config, const Clock& clock,
                           const Sleeper& sleep = real_sleeper());

/// Offline drafter: fixed physical-type mapping, name-token PII linking,
/// sla/owner hints from annotations. Pure function of the bundle (plus the
/// provenance timestamp from `clock`).
DraftResult deterministic_draft(const ContextBundle& bundle, const Clock& clock);

/// With a transport: build_prompt -> call_model -> enforce_schema.
/// Without: deterministic_draft.
DraftResult draft_contract(const ContextBundle& bundle, const ProviderConfig& config,
                           ModelTransport* transport, const Clock& clock,
                           const Sleeper& sleep = real_sleeper());

/// Closed physical -> logical type table; nullopt for unmapped types.
std::optional<LogicalType> map_physical_type(std::string_view physical);

} // namespace meshgate
