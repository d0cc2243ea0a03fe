// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/time.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace meshgate {

// Platform value metrics: adoption (U), discovery latency (F, minutes),
// insight latency (I, days), and their weighted normalized combination
//   V = w_u * U/U0 + w_f * (1 - F/F0) + w_i * (1 - I/I0).
// Negative terms are kept: they signal regression against the baseline.

struct AccessEvent {
    UtcSeconds timestamp{};
    std::string consumer_id;
    std::string product_id;
};

struct DiscoverySession {
    std::string session_id;
    UtcSeconds search_start{};
    UtcSeconds asset_selected{}; // >= search_start
};

struct InsightTicket {
    std::string ticket_id;
    UtcSeconds opened{};
    UtcSeconds signed_off{}; // >= opened
};

struct EventLog {
    std::vector<AccessEvent> accesses;
    std::vector<DiscoverySession> sessions;
    std::vector<InsightTicket> tickets;
};

struct ValueScoreInput {
    double U = 0;
    double F = 0;
    double I = 0;
    double U0 = 200;
    double F0 = 45;
    double I0 = 5;
    double w_u = 1.0 / 3;
    double w_f = 1.0 / 3;
    double w_i = 1.0 / 3;
};

/// One record object per line with a `type` discriminator; `#` comments.
/// Throws UsageError with a line reference on malformed input.
EventLog parse_event_log(const std::string& text, const std::string& source_name);

/// Distinct consumers with at least one access in [start, end).
std::int64_t compute_U(const std::vector<AccessEvent>& events, UtcSeconds start,
                       UtcSeconds end);

/// Median minutes from search start to asset selection; even counts average
/// the middle two. Throws UndefinedMetricError on empty input.
double compute_F(const std::vector<DiscoverySession>& sessions);

/// Median fractional days from open to sign-off; same even-count rule.
double compute_I(const std::vector<InsightTicket>& tickets);

/// Exact formula evaluation after invariant checks (positive baselines,
/// non-negative weights summing to 1 within 1e-9, non-negative U/F/I).
/// Throws UsageError when an invariant fails.
double value_score(const ValueScoreInput& input);

/// Half-up rendering to two decimals, e.g. 1.0389 -> "1.04".
std::string render_value(double v);

struct RegimeRow {
    std::string label;
    ValueScoreInput input;
};

/// Tab-separated table: header `regime U F I V`, one row per input, V
/// rendered half-up to two decimals, order preserved.
std::string render_regime_table(const std::vector<RegimeRow>& rows);

/// Baselines/weights file with keys U0, F0, I0, w_u, w_f, w_i (key: value
/// lines). Missing keys keep their defaults. U/F/I stay zero.
ValueScoreInput load_baselines(const std::string& text, const std::string& source_name);

} // namespace meshgate
