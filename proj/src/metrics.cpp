// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/metrics.hpp"

#include "meshgate/contract.hpp"
#include "meshgate/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace meshgate {

namespace {

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg)
{
    throw UsageError(source + ":" + std::to_string(line) + ": " + msg);
}

UtcSeconds get_ts(const nlohmann::json& record, const char* key,
                  const std::string& source, int line)
{
    if (!record.contains(key) || !record[key].is_string()) {
        fail_at(source, line, std::string("missing timestamp key ") + key);
    }
    auto t = parse_utc(record[key].get<std::string>());
    if (!t) {
        fail_at(source, line,
                std::string(key) + " must be an ISO-8601 UTC timestamp");
    }
    return *t;
}

std::string get_str(const nlohmann::json& record, const char* key,
                    const std::string& source, int line)
{
    if (!record.contains(key) || !record[key].is_string() ||
        record[key].get<std::string>().empty()) {
        fail_at(source, line, std::string("missing or empty key ") + key);
    }
    return record[key].get<std::string>();
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw UndefinedMetricError("median of an empty series is undefined");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

} // namespace

EventLog parse_event_log(const std::string& text, const std::string& source_name)
{
    EventLog log;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            fail_at(source_name, line_no, "expected one record object per line");
        }
        if (!record.contains("type") || !record["type"].is_string()) {
            fail_at(source_name, line_no, "missing type discriminator");
        }
        const std::string type = record["type"].get<std::string>();

        if (type == "access") {
            AccessEvent e;
            e.timestamp = get_ts(record, "ts", source_name, line_no);
            e.consumer_id = get_str(record, "consumer", source_name, line_no);
            e.product_id = get_str(record, "product", source_name, line_no);
            log.accesses.push_back(std::move(e));
        } else if (type == "discovery") {
            DiscoverySession s;
            s.session_id = get_str(record, "session", source_name, line_no);
            s.search_start = get_ts(record, "search_ts", source_name, line_no);
            s.asset_selected = get_ts(record, "select_ts", source_name, line_no);
            if (s.asset_selected < s.search_start) {
                fail_at(source_name, line_no, "select_ts precedes search_ts");
            }
            log.sessions.push_back(std::move(s));
        } else if (type == "insight") {
            InsightTicket t;
            t.ticket_id = get_str(record, "ticket", source_name, line_no);
            t.opened = get_ts(record, "opened_ts", source_name, line_no);
            t.signed_off = get_ts(record, "signoff_ts", source_name, line_no);
            if (t.signed_off < t.opened) {
                fail_at(source_name, line_no, "signoff_ts precedes opened_ts");
            }
            log.tickets.push_back(std::move(t));
        } else {
            fail_at(source_name, line_no, "unknown event type: " + type);
        }
    }
    return log;
}

std::int64_t compute_U(const std::vector<AccessEvent>& events, UtcSeconds start,
                       UtcSeconds end)
{
    if (!(start < end)) throw UsageError("window start must precede window end");
    std::set<std::string> consumers;
    for (const AccessEvent& e : events) {
        if (e.timestamp >= start && e.timestamp < end) {
            consumers.insert(e.consumer_id);
        }
    }
    return static_cast<std::int64_t>(consumers.size());
}

double compute_F(const std::vector<DiscoverySession>& sessions)
{
    std::vector<double> minutes;
    minutes.reserve(sessions.size());
    for (const DiscoverySession& s : sessions) {
        minutes.push_back(
            static_cast<double>((s.asset_selected - s.search_start).count()) / 60.0);
    }
    return median(std::move(minutes));
}

double compute_I(const std::vector<InsightTicket>& tickets)
{
    std::vector<double> days;
    days.reserve(tickets.size());
    for (const InsightTicket& t : tickets) {
        days.push_back(
            static_cast<double>((t.signed_off - t.opened).count()) / 86400.0);
    }
    return median(std::move(days));
}

double value_score(const ValueScoreInput& in)
{
    if (!(in.U0 > 0) || !(in.F0 > 0) || !(in.I0 > 0)) {
        throw UsageError("baselines U0, F0, I0 must be positive");
    }
    if (in.w_u < 0 || in.w_f < 0 || in.w_i < 0) {
        throw UsageError("weights must be non-negative");
    }
    if (std::abs(in.w_u + in.w_f + in.w_i - 1.0) > 1e-9) {
        throw UsageError("weights must sum to 1");
    }
    if (in.U < 0 || in.F < 0 || in.I < 0) {
        throw UsageError("U, F, I must be non-negative");
    }
    return in.w_u * (in.U / in.U0) + in.w_f * (1.0 - in.F / in.F0) +
           in.w_i * (1.0 - in.I / in.I0);
}

std::string render_value(double v)
{
    // Half-up at the second decimal: 1.0389 -> 1.04, -0.125 -> -0.12.
    const double scaled = std::floor(v * 100.0 + 0.5);
    long long cents = static_cast<long long>(scaled);
    std::string sign;
    if (cents < 0) {
        sign = "-";
        cents = -cents;
    }
    std::string frac = std::to_string(cents % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return sign + std::to_string(cents / 100) + "." + frac;
}

std::string render_regime_table(const std::vector<RegimeRow>& rows)
{
    std::string out = "regime\tU\tF\tI\tV\n";
    for (const RegimeRow& row : rows) {
        out += row.label + "\t" + format_double(row.input.U) + "\t" +
               format_double(row.input.F) + "\t" + format_double(row.input.I) + "\t" +
               render_value(value_score(row.input)) + "\n";
    }
    return out;
}

ValueScoreInput load_baselines(const std::string& text, const std::string& source_name)
{
    ValueScoreInput input;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        std::size_t colon = line.find(':');
        if (colon == std::string::npos) fail_at(source_name, line_no, "expected key: value");
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        std::size_t start = value.find_first_not_of(' ');
        value = (start == std::string::npos) ? "" : value.substr(start);

        auto v = parse_double(value);
        if (!v) fail_at(source_name, line_no, "value must be a number");
        if (!seen.insert(key).second) fail_at(source_name, line_no, "duplicate key " + key);

        if (key == "U0") input.U0 = *v;
        else if (key == "F0") input.F0 = *v;
        else if (key == "I0") input.I0 = *v;
        else if (key == "w_u") input.w_u = *v;
        else if (key == "w_f") input.w_f = *v;
        else if (key == "w_i") input.w_i = *v;
        else fail_at(source_name, line_no, "unknown key: " + key);
    }
    return input;
}

} // namespace meshgate
