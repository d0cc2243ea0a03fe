// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/context.hpp"

#include "meshgate/contract.hpp"
#include "meshgate/digest.hpp"
#include "meshgate/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace meshgate {

namespace {

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg)
{
    throw UsageError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string strip(std::string_view s)
{
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_pipes(std::string_view s)
{
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t bar = s.find('|', pos);
        if (bar == std::string_view::npos) {
            parts.push_back(strip(s.substr(pos)));
            break;
        }
        parts.push_back(strip(s.substr(pos, bar - pos)));
        pos = bar + 1;
    }
    return parts;
}

// Iterates `key: value` lines, skipping blanks and `#` comments. The handler
// decides what keys mean; `key` is empty for non key/value lines.
template <typename Handler>
void for_each_line(std::string_view text, Handler&& handle)
{
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++line_no;
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

        std::string trimmed = strip(raw);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        handle(line_no, std::string(raw), trimmed);
    }
}

std::string read_file_or_fail(const std::filesystem::path& path,
                              const std::string& what)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(what + " not found: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::string_view to_string(AnnotationTag t)
{
    switch (t) {
    case AnnotationTag::BusinessRule: return "business_rule";
    case AnnotationTag::SlaHint: return "sla_hint";
    case AnnotationTag::OwnerHint: return "owner_hint";
    case AnnotationTag::Freeform: return "freeform";
    }
    return "?";
}

std::optional<AnnotationTag> annotation_tag_from(std::string_view name)
{
    for (AnnotationTag t : {AnnotationTag::BusinessRule, AnnotationTag::SlaHint,
                            AnnotationTag::OwnerHint, AnnotationTag::Freeform}) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

TableMetadata parse_catalog(std::string_view text, const std::string& source_name)
{
    TableMetadata meta;
    bool in_columns = false;
    bool saw_columns = false;

    for_each_line(text, [&](int line, const std::string& raw, const std::string& t) {
        if (in_columns) {
            if (raw.rfind("  - ", 0) == 0) {
                auto parts = split_pipes(std::string_view(raw).substr(4));
                if (parts.size() < 3 || parts.size() > 4) {
                    fail_at(source_name, line,
                            "column row needs name|physical_type|nullable|description");
                }
                ColumnInfo col;
                col.name = parts[0];
                col.physical_type = parts[1];
                if (parts[2] == "true") col.nullable = true;
                else if (parts[2] == "false") col.nullable = false;
                else fail_at(source_name, line, "nullable must be true or false");
                if (parts.size() == 4) col.description = parts[3];
                if (col.name.empty())
                    fail_at(source_name, line, "column name must be non-empty");
                if (col.physical_type.empty())
                    fail_at(source_name, line, "physical_type must be non-empty");
                meta.columns.push_back(std::move(col));
                return;
            }
            in_columns = false; // fall through to key handling
        }

        std::size_t colon = t.find(':');
        if (colon == std::string::npos) {
            fail_at(source_name, line, "expected key: value");
        }
        std::string key = t.substr(0, colon);
        std::string value = strip(std::string_view(t).substr(colon + 1));

        if (key == "dataset") {
            if (!meta.dataset_name.empty())
                fail_at(source_name, line, "duplicate dataset key");
            meta.dataset_name = value;
        } else if (key == "description") {
            meta.catalog_description = value;
        } else if (key == "upstream") {
            if (value.empty()) fail_at(source_name, line, "empty upstream reference");
            meta.lineage_upstream.push_back(value);
        } else if (key == "columns") {
            if (!value.empty())
                fail_at(source_name, line, "columns: opens a block, no inline value");
            if (saw_columns) fail_at(source_name, line, "duplicate columns block");
            saw_columns = true;
            in_columns = true;
        } else {
            fail_at(source_name, line, "unknown key: " + key);
        }
    });

    if (meta.dataset_name.empty()) {
        throw UsageError(source_name + ": missing dataset key");
    }
    if (!is_identifier(meta.dataset_name)) {
        throw UsageError(source_name + ": dataset is not a valid identifier: " +
                         meta.dataset_name);
    }
    std::set<std::string> seen;
    for (const ColumnInfo& col : meta.columns) {
        if (!seen.insert(col.name).second) {
            throw UsageError(source_name + ": duplicate column: " + col.name);
        }
    }
    return meta;
}

TableMetadata fetch_metadata(const std::filesystem::path& catalog_root,
                             const std::string& dataset)
{
    const auto path = catalog_root / (dataset + ".catalog");
    TableMetadata meta =
        parse_catalog(read_file_or_fail(path, "catalog entry for " + dataset),
                      path.string());
    if (meta.dataset_name != dataset) {
        throw UsageError(path.string() + ": dataset key " + meta.dataset_name +
                         " does not match requested " + dataset);
    }
    return meta;
}

RulePack parse_rulepack(std::string_view text, const std::string& source_name)
{
    RulePack pack;
    bool saw_gdpr = false;

    for_each_line(text, [&](int line, const std::string&, const std::string& t) {
        std::size_t colon = t.find(':');
        if (colon == std::string::npos) fail_at(source_name, line, "expected key: value");
        std::string key = t.substr(0, colon);
        std::string value = strip(std::string_view(t).substr(colon + 1));

        if (key == "pack_id") {
            if (!pack.pack_id.empty()) fail_at(source_name, line, "duplicate pack_id");
            pack.pack_id = value;
        } else if (key == "gdpr") {
            if (saw_gdpr) fail_at(source_name, line, "duplicate gdpr key");
            saw_gdpr = true;
            if (value == "true") pack.gdpr_applies = true;
            else if (value == "false") pack.gdpr_applies = false;
            else fail_at(source_name, line, "gdpr must be true or false");
        } else if (key == "retention_days") {
            auto days = parse_int(value);
            if (!days || *days <= 0)
                fail_at(source_name, line, "retention_days must be a positive integer");
            pack.default_retention_days = *days;
        } else if (key == "pattern") {
            auto parts = split_pipes(value);
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
                fail_at(source_name, line, "pattern needs label|detection_ref");
            pack.pii_patterns.push_back({parts[0], parts[1]});
        } else {
            fail_at(source_name, line, "unknown key: " + key);
        }
    });

    if (pack.pack_id.empty()) throw UsageError(source_name + ": missing pack_id");
    std::set<std::string> labels;
    for (const PiiPattern& p : pack.pii_patterns) {
        if (!labels.insert(p.label).second) {
            throw UsageError(source_name + ": duplicate label: " + p.label);
        }
    }
    return pack;
}

RulePack load_compliance(const std::filesystem::path& rulepack_path)
{
    return parse_rulepack(read_file_or_fail(rulepack_path, "rule pack"),
                          rulepack_path.string());
}

AnnotationSet collect_annotations(std::string_view notes_source)
{
    AnnotationSet set;
    for_each_line(notes_source, [&](int line, const std::string&, const std::string& t) {
        AnnotationNote note;
        std::string text = t;
        if (!text.empty() && text.front() == '[') {
            std::size_t close = text.find(']');
            if (close == std::string::npos) {
                throw UsageError("notes:" + std::to_string(line) +
                                 ": unterminated tag marker");
            }
            std::string tag_name = text.substr(1, close - 1);
            auto tag = annotation_tag_from(tag_name);
            if (!tag) {
                throw UsageError("notes:" + std::to_string(line) +
                                 ": unknown tag: " + tag_name);
            }
            note.tag = *tag;
            text = strip(std::string_view(text).substr(close + 1));
        }
        if (text.empty()) {
            throw UsageError("notes:" + std::to_string(line) + ": empty note text");
        }
        note.text = std::move(text);
        set.notes.push_back(std::move(note));
    });
    return set;
}

std::string render_context(const TableMetadata& metadata, const RulePack& rulepack,
                           const AnnotationSet& annotations)
{
    std::string out;
    out += "catalog:\n";
    out += "  dataset: " + metadata.dataset_name + "\n";
    out += "  description: " + metadata.catalog_description + "\n";
    for (const std::string& up : metadata.lineage_upstream) {
        out += "  upstream: " + up + "\n";
    }
    for (const ColumnInfo& col : metadata.columns) {
        out += "  column: " + col.name + "|" + col.physical_type + "|" +
               (col.nullable ? "true" : "false") + "|" + col.description + "\n";
    }
    out += "rulepack:\n";
    out += "  pack_id: " + rulepack.pack_id + "\n";
    out += std::string("  gdpr: ") + (rulepack.gdpr_applies ? "true" : "false") + "\n";
    out += "  retention_days: " +
           (rulepack.default_retention_days
                ? std::to_string(*rulepack.default_retention_days)
                : std::string("-")) +
           "\n";
    for (const PiiPattern& p : rulepack.pii_patterns) {
        out += "  pattern: " + p.label + "|" + p.detection_ref + "\n";
    }
    out += "annotations:\n";
    for (const AnnotationNote& note : annotations.notes) {
        out += "  note: " + std::string(to_string(note.tag)) + "|" + note.text + "\n";
    }
    return out;
}

ContextBundle assemble_context(TableMetadata metadata, RulePack rulepack,
                               AnnotationSet annotations)
{
    ContextBundle bundle;
    bundle.digest = sha256_hex(render_context(metadata, rulepack, annotations));
    bundle.metadata = std::move(metadata);
    bundle.rulepack = std::move(rulepack);
    bundle.annotations = std::move(annotations);
    return bundle;
}

} // namespace meshgate
