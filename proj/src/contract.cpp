// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/contract.hpp"

#include "meshgate/digest.hpp"
#include "meshgate/errors.hpp"
#include "meshgate/linedoc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>
#include <set>

namespace meshgate {

namespace {

constexpr std::size_t kMaxRegexPattern = 256;

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

std::string_view to_string(LogicalType t)
{
    switch (t) {
    case LogicalType::String: return "string";
    case LogicalType::Integer: return "integer";
    case LogicalType::Float: return "float";
    case LogicalType::Boolean: return "boolean";
    case LogicalType::Date: return "date";
    case LogicalType::Timestamp: return "timestamp";
    case LogicalType::Decimal: return "decimal";
    }
    return "?";
}

std::string_view to_string(RuleKind k)
{
    switch (k) {
    case RuleKind::NotNull: return "not_null";
    case RuleKind::Range: return "range";
    case RuleKind::Regex: return "regex";
    case RuleKind::EnumValues: return "enum_values";
    case RuleKind::Unique: return "unique";
    }
    return "?";
}

std::string_view to_string(Severity s)
{
    return s == Severity::Error ? "error" : "warn";
}

std::string_view to_string(PiiClass c)
{
    switch (c) {
    case PiiClass::None: return "none";
    case PiiClass::DirectIdentifier: return "direct_identifier";
    case PiiClass::QuasiIdentifier: return "quasi_identifier";
    case PiiClass::Financial: return "financial";
    }
    return "?";
}

std::string_view to_string(LifecycleState s)
{
    switch (s) {
    case LifecycleState::Draft: return "draft";
    case LifecycleState::PendingReview: return "pending_review";
    case LifecycleState::Approved: return "approved";
    case LifecycleState::Rejected: return "rejected";
    case LifecycleState::Superseded: return "superseded";
    }
    return "?";
}

std::string_view to_string(DrafterKind d)
{
    return d == DrafterKind::Deterministic ? "deterministic" : "model";
}

namespace {

template <typename T>
std::optional<T> enum_from(std::string_view name, std::initializer_list<T> all)
{
    for (T v : all) {
        if (to_string(v) == name) return v;
    }
    return std::nullopt;
}

} // namespace

std::optional<LogicalType> logical_type_from(std::string_view name)
{
    return enum_from(name, {LogicalType::String, LogicalType::Integer,
                            LogicalType::Float, LogicalType::Boolean,
                            LogicalType::Date, LogicalType::Timestamp,
                            LogicalType::Decimal});
}

std::optional<RuleKind> rule_kind_from(std::string_view name)
{
    return enum_from(name, {RuleKind::NotNull, RuleKind::Range, RuleKind::Regex,
                            RuleKind::EnumValues, RuleKind::Unique});
}

std::optional<Severity> severity_from(std::string_view name)
{
    return enum_from(name, {Severity::Error, Severity::Warn});
}

std::optional<PiiClass> pii_class_from(std::string_view name)
{
    return enum_from(name, {PiiClass::None, PiiClass::DirectIdentifier,
                            PiiClass::QuasiIdentifier, PiiClass::Financial});
}

std::optional<LifecycleState> lifecycle_state_from(std::string_view name)
{
    return enum_from(name, {LifecycleState::Draft, LifecycleState::PendingReview,
                            LifecycleState::Approved, LifecycleState::Rejected,
                            LifecycleState::Superseded});
}

std::optional<DrafterKind> drafter_kind_from(std::string_view name)
{
    return enum_from(name, {DrafterKind::Deterministic, DrafterKind::Model});
}

// ---------------------------------------------------------------------------
// SemVer
// ---------------------------------------------------------------------------

std::optional<SemVer> SemVer::parse(std::string_view text)
{
    SemVer v;
    int* parts[3] = {&v.major, &v.minor, &v.patch};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t end = (i < 2) ? text.find('.', pos) : text.size();
        if (end == std::string_view::npos || end == pos) return std::nullopt;
        std::string_view part = text.substr(pos, end - pos);
        if (part.size() > 1 && part.front() == '0') return std::nullopt;
        int value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc{} || ptr != part.data() + part.size() || value < 0)
            return std::nullopt;
        *parts[i] = value;
        pos = end + 1;
    }
    return v;
}

std::string SemVer::str() const
{
    return std::to_string(major) + "." + std::to_string(minor) + "." +
           std::to_string(patch);
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

bool is_identifier(std::string_view s)
{
    if (s.empty()) return false;
    bool segment_start = true;
    for (char c : s) {
        if (segment_start) {
            if (c < 'a' || c > 'z') return false;
            segment_start = false;
        } else if (c == '.') {
            segment_start = true;
        } else if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
            return false;
        }
    }
    return !segment_start;
}

bool is_basic_email(std::string_view s)
{
    const std::size_t at = s.find('@');
    if (at == std::string_view::npos || at == 0) return false;
    if (s.find('@', at + 1) != std::string_view::npos) return false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || static_cast<unsigned char>(c) < 0x20) return false;
    }
    std::string_view domain = s.substr(at + 1);
    if (domain.empty() || domain.front() == '.' || domain.back() == '.') return false;
    std::size_t dots = 0;
    std::size_t label_len = 0;
    for (char c : domain) {
        if (c == '.') {
            if (label_len == 0) return false;
            ++dots;
            label_len = 0;
        } else {
            ++label_len;
        }
    }
    return dots >= 1;
}

bool rule_applies_to(RuleKind kind, LogicalType type)
{
    switch (kind) {
    case RuleKind::NotNull:
    case RuleKind::Unique:
        return true;
    case RuleKind::Range:
        return type == LogicalType::Integer || type == LogicalType::Float ||
               type == LogicalType::Decimal || type == LogicalType::Date ||
               type == LogicalType::Timestamp;
    case RuleKind::Regex:
    case RuleKind::EnumValues:
        return type == LogicalType::String;
    }
    return false;
}

bool legal_transition(LifecycleState from, LifecycleState to)
{
    switch (from) {
    case LifecycleState::Draft:
        return to == LifecycleState::PendingReview;
    case LifecycleState::PendingReview:
        return to == LifecycleState::Approved || to == LifecycleState::Rejected;
    case LifecycleState::Approved:
        return to == LifecycleState::Superseded;
    case LifecycleState::Rejected:
    case LifecycleState::Superseded:
        return false;
    }
    return false;
}

const FieldSpec* DataContract::find_field(std::string_view name) const
{
    const std::string wanted = to_lower(name);
    for (const FieldSpec& f : schema) {
        if (to_lower(f.name) == wanted) return &f;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void validate_rule(const QualityRule& rule, LogicalType type, const std::string& path,
                   std::vector<ValidationIssue>& issues)
{
    if (!rule_applies_to(rule.kind, type)) {
        issues.push_back({path, std::string("rule ") + std::string(to_string(rule.kind)) +
                                    " not applicable to type " +
                                    std::string(to_string(type))});
    }
    const bool is_range = rule.kind == RuleKind::Range;
    const bool is_regex = rule.kind == RuleKind::Regex;
    const bool is_enum = rule.kind == RuleKind::EnumValues;

    if (is_range) {
        if (!rule.min && !rule.max) {
            issues.push_back({path, "range requires at least one bound"});
        }
        if ((rule.min && !std::isfinite(*rule.min)) ||
            (rule.max && !std::isfinite(*rule.max))) {
            issues.push_back({path, "range bounds must be finite"});
        } else if (rule.min && rule.max && *rule.min > *rule.max) {
            issues.push_back({path, "range min must not exceed max"});
        }
    } else if (rule.min || rule.max) {
        issues.push_back({path, "min/max only valid for range rules"});
    }

    if (is_regex) {
        if (rule.pattern.empty()) {
            issues.push_back({path + ".pattern", "regex pattern must be non-empty"});
        } else if (rule.pattern.size() > kMaxRegexPattern) {
            issues.push_back({path + ".pattern", "regex pattern too long"});
        } else {
            try {
                std::regex re(rule.pattern);
            } catch (const std::regex_error&) {
                issues.push_back({path + ".pattern", "invalid regex pattern"});
            }
        }
    } else if (!rule.pattern.empty()) {
        issues.push_back({path, "pattern only valid for regex rules"});
    }

    if (is_enum) {
        if (rule.values.empty()) {
            issues.push_back({path + ".values", "enum_values must be non-empty"});
        }
        std::set<std::string> seen;
        for (const std::string& v : rule.values) {
            if (!seen.insert(v).second) {
                issues.push_back({path + ".values", "duplicate enum value: " + v});
            }
        }
    } else if (!rule.values.empty()) {
        issues.push_back({path, "values only valid for enum_values rules"});
    }
}

} // namespace

std::vector<ValidationIssue> validate(const DataContract& c)
{
    std::vector<ValidationIssue> issues;

    if (!is_identifier(c.dataset_name)) {
        issues.push_back({"dataset_name", "not a valid dotted identifier"});
    }
    if (c.version.major < 0 || c.version.minor < 0 || c.version.patch < 0) {
        issues.push_back({"version", "components must be non-negative"});
    }

    if (c.schema.empty()) {
        issues.push_back({"schema", "must declare at least one field"});
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < c.schema.size(); ++i) {
        const FieldSpec& f = c.schema[i];
        const std::string path = "schema[" + std::to_string(i) + "]";
        if (!is_identifier(f.name)) {
            issues.push_back({path + ".name", "not a valid identifier: " + f.name});
        }
        if (!names.insert(to_lower(f.name)).second) {
            issues.push_back({path + ".name", "duplicate field: " + f.name});
        }
        std::set<RuleKind> kinds;
        for (std::size_t r = 0; r < f.rules.size(); ++r) {
            const std::string rule_path = path + ".rules[" + std::to_string(r) + "]";
            if (!kinds.insert(f.rules[r].kind).second) {
                issues.push_back({rule_path, std::string("duplicate rule kind: ") +
                                                 std::string(to_string(f.rules[r].kind))});
            }
            validate_rule(f.rules[r], f.type, rule_path, issues);
        }
    }

    if (c.sla.freshness_max_age_seconds <= 0) {
        issues.push_back({"sla.freshness_max_age_seconds", "must be positive"});
    }
    if (!(c.sla.quality_min_pass_rate >= 0.0 && c.sla.quality_min_pass_rate <= 1.0)) {
        issues.push_back({"sla.quality_min_pass_rate", "must lie in [0, 1]"});
    }

    std::set<std::string> pii_seen;
    for (std::size_t i = 0; i < c.compliance.pii_fields.size(); ++i) {
        const std::string& name = c.compliance.pii_fields[i];
        const std::string path = "compliance.pii_fields[" + std::to_string(i) + "]";
        if (!pii_seen.insert(to_lower(name)).second) {
            issues.push_back({path, "duplicate entry: " + name});
        }
        if (names.find(to_lower(name)) == names.end()) {
            issues.push_back({path, "unknown field: " + name});
        }
    }
    if (c.compliance.retention_days && *c.compliance.retention_days <= 0) {
        issues.push_back({"compliance.retention_days", "must be positive"});
    }

    if (c.owner.team.empty()) {
        issues.push_back({"owner.team", "must be non-empty"});
    }
    if (!is_basic_email(c.owner.email)) {
        issues.push_back({"owner.email", "not a basic email address"});
    }

    if (!is_hex_digest(c.provenance.context_digest)) {
        issues.push_back({"provenance.context_digest", "not a 64-char hex digest"});
    }

    return issues;
}

// ---------------------------------------------------------------------------
// Scalar formatting
// ---------------------------------------------------------------------------

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view token)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_int(std::string_view token)
{
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void emit_rule(std::string& out, const QualityRule& rule)
{
    out += "      - kind: ";
    out += to_string(rule.kind);
    out += '\n';
    if (rule.kind == RuleKind::Range) {
        if (rule.min) out += "        min: " + format_double(*rule.min) + "\n";
        if (rule.max) out += "        max: " + format_double(*rule.max) + "\n";
    } else if (rule.kind == RuleKind::Regex) {
        out += "        pattern: " + linedoc::quote(rule.pattern) + "\n";
    } else if (rule.kind == RuleKind::EnumValues) {
        out += "        values: [";
        for (std::size_t i = 0; i < rule.values.size(); ++i) {
            if (i) out += ", ";
            out += linedoc::quote(rule.values[i]);
        }
        out += "]\n";
    }
    out += "        severity: ";
    out += to_string(rule.severity);
    out += '\n';
}

void emit_field(std::string& out, const FieldSpec& f)
{
    out += "  - name: " + f.name + "\n";
    out += "    type: ";
    out += to_string(f.type);
    out += '\n';
    out += std::string("    nullable: ") + (f.nullable ? "true" : "false") + "\n";
    out += "    description: " + linedoc::quote(f.description) + "\n";
    if (f.pii_class) {
        out += "    pii_class: ";
        out += to_string(*f.pii_class);
        out += '\n';
    }
    if (!f.rules.empty()) {
        out += "    rules:\n";
        for (const QualityRule& rule : f.rules) emit_rule(out, rule);
    }
}

} // namespace

std::string serialize(const DataContract& c)
{
    auto issues = validate(c);
    if (!issues.empty()) {
        throw ValidationError(issues.front().field + ": " + issues.front().message);
    }

    std::string out;
    out.reserve(1024);
    out += "dataset_name: " + c.dataset_name + "\n";
    out += "version: " + c.version.str() + "\n";
    out += "status: ";
    out += to_string(c.status);
    out += '\n';
    out += "owner:\n";
    out += "  team: " + linedoc::quote(c.owner.team) + "\n";
    out += "  email: " + linedoc::quote(c.owner.email) + "\n";
    out += "schema:\n";
    for (const FieldSpec& f : c.schema) emit_field(out, f);
    out += "sla:\n";
    out += "  freshness_max_age_seconds: " +
           std::to_string(c.sla.freshness_max_age_seconds) + "\n";
    out += "  quality_min_pass_rate: " + format_double(c.sla.quality_min_pass_rate) +
           "\n";
    out += "compliance:\n";
    out += "  pii_fields: [";
    for (std::size_t i = 0; i < c.compliance.pii_fields.size(); ++i) {
        if (i) out += ", ";
        out += c.compliance.pii_fields[i];
    }
    out += "]\n";
    out += std::string("  gdpr: ") + (c.compliance.gdpr ? "true" : "false") + "\n";
    if (c.compliance.retention_days) {
        out += "  retention_days: " + std::to_string(*c.compliance.retention_days) +
               "\n";
    }
    out += "provenance:\n";
    out += "  drafter: ";
    out += to_string(c.provenance.drafter);
    out += '\n';
    out += "  context_digest: " + c.provenance.context_digest + "\n";
    out += "  drafted_at: " + format_utc(c.provenance.drafted_at) + "\n";
    return out;
}

std::string content_digest(const DataContract& c)
{
    return sha256_hex(serialize(c));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

using linedoc::Node;
using linedoc::NodeKind;

struct Reader {
    std::vector<ContractParseError>& errors;
    std::map<std::string, int> path_lines;

    void err(int line, std::string message)
    {
        errors.push_back({line, std::move(message)});
    }

    // Returns the scalar node for `key`, recording its line under `path`.
    const Node* scalar(const Node& mapping, const std::string& key,
                       const std::string& path, bool required)
    {
        const Node* n = mapping.find(key);
        if (!n) {
            if (required) err(mapping.line, "missing key: " + key);
            return nullptr;
        }
        path_lines[path] = n->line;
        if (n->kind != NodeKind::Scalar) {
            err(n->line, key + " must be a scalar value");
            return nullptr;
        }
        return n;
    }

    const Node* block(const Node& mapping, const std::string& key,
                      const std::string& path, NodeKind kind, bool required)
    {
        const Node* n = mapping.find(key);
        if (!n) {
            if (required) err(mapping.line, "missing key: " + key);
            return nullptr;
        }
        path_lines[path] = n->line;
        if (n->kind != kind) {
            err(n->line, key + (kind == NodeKind::List ? " must be a list"
                                                       : " must be a block"));
            return nullptr;
        }
        return n;
    }

    void reject_unknown(const Node& mapping, std::initializer_list<const char*> known)
    {
        for (const auto& [key, child] : mapping.entries) {
            bool ok = false;
            for (const char* k : known) {
                if (key == k) {
                    ok = true;
                    break;
                }
            }
            if (!ok) err(child.line, "unknown key: " + key);
        }
    }

    std::optional<std::string> text(const Node& n)
    {
        auto decoded = linedoc::unquote(n.scalar);
        if (!decoded) {
            err(n.line, "expected a quoted string");
            return std::nullopt;
        }
        return decoded;
    }

    std::optional<bool> boolean(const Node& n)
    {
        if (n.scalar == "true") return true;
        if (n.scalar == "false") return false;
        err(n.line, "expected true or false");
        return std::nullopt;
    }

    std::optional<std::int64_t> integer(const Node& n)
    {
        auto v = parse_int(n.scalar);
        if (!v) err(n.line, "expected an integer");
        return v;
    }

    std::optional<double> number(const Node& n)
    {
        auto v = parse_double(n.scalar);
        if (!v) err(n.line, "expected a number");
        return v;
    }
};

QualityRule read_rule(Reader& rd, const Node& item, const std::string& path)
{
    QualityRule rule;
    rd.reject_unknown(item, {"kind", "min", "max", "pattern", "values", "severity"});
    if (const Node* n = rd.scalar(item, "kind", path + ".kind", true)) {
        auto kind = rule_kind_from(n->scalar);
        if (kind) {
            rule.kind = *kind;
        } else {
            rd.err(n->line, "unknown rule kind: " + n->scalar);
        }
    }
    if (const Node* n = rd.scalar(item, "min", path + ".min", false)) {
        rule.min = rd.number(*n);
    }
    if (const Node* n = rd.scalar(item, "max", path + ".max", false)) {
        rule.max = rd.number(*n);
    }
    if (const Node* n = rd.scalar(item, "pattern", path + ".pattern", false)) {
        if (auto t = rd.text(*n)) rule.pattern = *t;
    }
    if (const Node* n = rd.scalar(item, "values", path + ".values", false)) {
        auto elements = linedoc::split_inline_list(n->scalar);
        if (!elements) {
            rd.err(n->line, "values must be an inline list");
        } else {
            for (const std::string& e : *elements) {
                auto decoded = linedoc::unquote(e);
                if (!decoded) {
                    rd.err(n->line, "enum value must be a quoted string");
                    continue;
                }
                rule.values.push_back(*decoded);
            }
        }
    }
    if (const Node* n = rd.scalar(item, "severity", path + ".severity", false)) {
        auto sev = severity_from(n->scalar);
        if (sev) {
            rule.severity = *sev;
        } else {
            rd.err(n->line, "unknown severity: " + n->scalar);
        }
    }
    return rule;
}

FieldSpec read_field(Reader& rd, const Node& item, const std::string& path)
{
    FieldSpec f;
    rd.reject_unknown(item,
                      {"name", "type", "nullable", "description", "pii_class", "rules"});
    rd.path_lines[path] = item.line;
    if (const Node* n = rd.scalar(item, "name", path + ".name", true)) {
        f.name = n->scalar;
    }
    if (const Node* n = rd.scalar(item, "type", path + ".type", true)) {
        auto t = logical_type_from(n->scalar);
        if (t) {
            f.type = *t;
        } else {
            rd.err(n->line, "unknown logical type: " + n->scalar);
        }
    }
    if (const Node* n = rd.scalar(item, "nullable", path + ".nullable", true)) {
        if (auto b = rd.boolean(*n)) f.nullable = *b;
    }
    if (const Node* n = rd.scalar(item, "description", path + ".description", false)) {
        if (auto t = rd.text(*n)) f.description = *t;
    }
    if (const Node* n = rd.scalar(item, "pii_class", path + ".pii_class", false)) {
        auto c = pii_class_from(n->scalar);
        if (c) {
            f.pii_class = *c;
        } else {
            rd.err(n->line, "unknown pii_class: " + n->scalar);
        }
    }
    if (const Node* n = rd.block(item, "rules", path + ".rules", NodeKind::List, false)) {
        for (std::size_t i = 0; i < n->items.size(); ++i) {
            const Node& rule_item = n->items[i];
            const std::string rule_path = path + ".rules[" + std::to_string(i) + "]";
            rd.path_lines[rule_path] = rule_item.line;
            if (rule_item.kind != NodeKind::Mapping) {
                rd.err(rule_item.line, "rule must be a key/value block");
                continue;
            }
            f.rules.push_back(read_rule(rd, rule_item, rule_path));
        }
    }
    return f;
}

} // namespace

ContractParseResult parse_contract(std::string_view document)
{
    ContractParseResult result;
    auto doc = linedoc::parse(document);
    if (!doc.root) {
        for (const auto& issue : doc.issues) {
            result.errors.push_back({issue.line, issue.message});
        }
        if (result.errors.empty()) result.errors.push_back({1, "unparseable document"});
        return result;
    }

    const Node& root = *doc.root;
    if (root.kind != NodeKind::Mapping) {
        result.errors.push_back({root.line, "document must be a key/value mapping"});
        return result;
    }

    Reader rd{result.errors, {}};
    rd.reject_unknown(root, {"dataset_name", "version", "status", "owner", "schema",
                             "sla", "compliance", "provenance"});

    DataContract c;
    if (const Node* n = rd.scalar(root, "dataset_name", "dataset_name", true)) {
        c.dataset_name = n->scalar;
    }
    if (const Node* n = rd.scalar(root, "version", "version", true)) {
        auto v = SemVer::parse(n->scalar);
        if (v) {
            c.version = *v;
        } else {
            rd.err(n->line, "version must be major.minor.patch: " + n->scalar);
        }
    }
    if (const Node* n = rd.scalar(root, "status", "status", true)) {
        auto s = lifecycle_state_from(n->scalar);
        if (s) {
            c.status = *s;
        } else {
            rd.err(n->line, "unknown status: " + n->scalar);
        }
    }
    if (const Node* n = rd.block(root, "owner", "owner", NodeKind::Mapping, true)) {
        rd.reject_unknown(*n, {"team", "email"});
        if (const Node* t = rd.scalar(*n, "team", "owner.team", true)) {
            if (auto s = rd.text(*t)) c.owner.team = *s;
        }
        if (const Node* e = rd.scalar(*n, "email", "owner.email", true)) {
            if (auto s = rd.text(*e)) c.owner.email = *s;
        }
    }
    if (const Node* n = rd.block(root, "schema", "schema", NodeKind::List, true)) {
        for (std::size_t i = 0; i < n->items.size(); ++i) {
            const Node& item = n->items[i];
            const std::string path = "schema[" + std::to_string(i) + "]";
            if (item.kind != NodeKind::Mapping) {
                rd.err(item.line, "schema entry must be a field block");
                continue;
            }
            c.schema.push_back(read_field(rd, item, path));
        }
    }
    if (const Node* n = rd.block(root, "sla", "sla", NodeKind::Mapping, true)) {
        rd.reject_unknown(*n, {"freshness_max_age_seconds", "quality_min_pass_rate"});
        if (const Node* f = rd.scalar(*n, "freshness_max_age_seconds",
                                      "sla.freshness_max_age_seconds", true)) {
            if (auto v = rd.integer(*f)) c.sla.freshness_max_age_seconds = *v;
        }
        if (const Node* q = rd.scalar(*n, "quality_min_pass_rate",
                                      "sla.quality_min_pass_rate", true)) {
            if (auto v = rd.number(*q)) c.sla.quality_min_pass_rate = *v;
        }
    }
    if (const Node* n =
            rd.block(root, "compliance", "compliance", NodeKind::Mapping, true)) {
        rd.reject_unknown(*n, {"pii_fields", "gdpr", "retention_days"});
        if (const Node* p =
                rd.scalar(*n, "pii_fields", "compliance.pii_fields", false)) {
            auto elements = linedoc::split_inline_list(p->scalar);
            if (!elements) {
                rd.err(p->line, "pii_fields must be an inline list");
            } else {
                for (std::size_t i = 0; i < elements->size(); ++i) {
                    rd.path_lines["compliance.pii_fields[" + std::to_string(i) + "]"] =
                        p->line;
                    c.compliance.pii_fields.push_back((*elements)[i]);
                }
            }
        }
        if (const Node* g = rd.scalar(*n, "gdpr", "compliance.gdpr", false)) {
            if (auto b = rd.boolean(*g)) c.compliance.gdpr = *b;
        }
        if (const Node* r =
                rd.scalar(*n, "retention_days", "compliance.retention_days", false)) {
            if (auto v = rd.integer(*r)) c.compliance.retention_days = *v;
        }
    }
    if (const Node* n =
            rd.block(root, "provenance", "provenance", NodeKind::Mapping, false)) {
        rd.reject_unknown(*n, {"drafter", "context_digest", "drafted_at"});
        if (const Node* d = rd.scalar(*n, "drafter", "provenance.drafter", true)) {
            auto k = drafter_kind_from(d->scalar);
            if (k) {
                c.provenance.drafter = *k;
            } else {
                rd.err(d->line, "unknown drafter kind: " + d->scalar);
            }
        }
        if (const Node* d =
                rd.scalar(*n, "context_digest", "provenance.context_digest", true)) {
            c.provenance.context_digest = d->scalar;
        }
        if (const Node* d =
                rd.scalar(*n, "drafted_at", "provenance.drafted_at", true)) {
            auto t = parse_utc(d->scalar);
            if (t) {
                c.provenance.drafted_at = *t;
            } else {
                rd.err(d->line, "drafted_at must be an ISO-8601 UTC timestamp");
            }
        }
    }

    if (!result.errors.empty()) return result;

    // Structural extraction succeeded; now enforce the type invariants with
    // best-effort line attribution.
    auto issues = validate(c);
    for (const ValidationIssue& issue : issues) {
        int line = 1;
        std::string key = issue.field;
        while (true) {
            auto it = rd.path_lines.find(key);
            if (it != rd.path_lines.end()) {
                line = it->second;
                break;
            }
            std::size_t cut = key.find_last_of(".[");
            if (cut == std::string::npos) break;
            key = key.substr(0, cut);
        }
        result.errors.push_back({line, issue.field + ": " + issue.message});
    }
    if (!result.errors.empty()) return result;

    result.contract = std::move(c);
    return result;
}

} // namespace meshgate
