// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/time.hpp"

#include <array>
#include <cstdio>

namespace meshgate {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

bool days_in_month_ok(std::int64_t y, unsigned m, unsigned d)
{
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    unsigned max = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) max = 29;
    return d <= max;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len,
                      std::int64_t& out)
{
    out = 0;
    if (pos + len > s.size()) return false;
    for (std::size_t i = 0; i < len; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

bool parse_date_part(std::string_view s, std::int64_t& days)
{
    std::int64_t y = 0, mo = 0, d = 0;
    if (s.size() != 10) return false;
    if (!parse_fixed_uint(s, 0, 4, y) || s[4] != '-' ||
        !parse_fixed_uint(s, 5, 2, mo) || s[7] != '-' ||
        !parse_fixed_uint(s, 8, 2, d)) {
        return false;
    }
    if (!days_in_month_ok(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)))
        return false;
    days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    return true;
}

} // namespace

UtcSeconds utc_now()
{
    return std::chrono::time_point_cast<std::chrono::seconds>(
        std::chrono::system_clock::now());
}

std::string format_utc(UtcSeconds t)
{
    std::int64_t total = t.time_since_epoch().count();
    std::int64_t days = total / 86400;
    std::int64_t rem = total % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), mo, d,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::optional<UtcSeconds> parse_utc(std::string_view text)
{
    if (text.size() != 20 || text[10] != 'T' || text[19] != 'Z') return std::nullopt;
    std::int64_t days = 0;
    if (!parse_date_part(text.substr(0, 10), days)) return std::nullopt;
    std::int64_t h = 0, mi = 0, se = 0;
    if (!parse_fixed_uint(text, 11, 2, h) || text[13] != ':' ||
        !parse_fixed_uint(text, 14, 2, mi) || text[16] != ':' ||
        !parse_fixed_uint(text, 17, 2, se)) {
        return std::nullopt;
    }
    if (h > 23 || mi > 59 || se > 59) return std::nullopt;
    return UtcSeconds{std::chrono::seconds{days * 86400 + h * 3600 + mi * 60 + se}};
}

std::optional<std::int64_t> parse_civil_date(std::string_view text)
{
    std::int64_t days = 0;
    if (!parse_date_part(text, days)) return std::nullopt;
    return days;
}

} // namespace meshgate
