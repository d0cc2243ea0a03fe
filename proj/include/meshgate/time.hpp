// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace meshgate {

/// UTC instant at second precision. All timestamps in meshgate use this.
using UtcSeconds =
    std::chrono::time_point<std::chrono::system_clock, std::chrono::seconds>;

/// Injectable clock; production code defaults to utc_now.
using Clock = std::function<UtcSeconds()>;

UtcSeconds utc_now();

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_utc(UtcSeconds t);

/// Strict parse of `YYYY-MM-DDTHH:MM:SSZ`; nullopt on any deviation.
std::optional<UtcSeconds> parse_utc(std::string_view text);

/// Strict parse of `YYYY-MM-DD`; returns days since 1970-01-01.
std::optional<std::int64_t> parse_civil_date(std::string_view text);

} // namespace meshgate
