// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshgate {

// Context gathering: catalog metadata, compliance rule packs, and free-text
// annotations are folded into one digestible bundle for the drafter.

struct ColumnInfo {
    std::string name;
    std::string physical_type;
    bool nullable = true;
    std::string description;

    bool operator==(const ColumnInfo&) const = default;
};

struct TableMetadata {
    std::string dataset_name;
    std::vector<ColumnInfo> columns;
    std::vector<std::string> lineage_upstream;
    std::string catalog_description;

    bool operator==(const TableMetadata&) const = default;
};

struct PiiPattern {
    std::string label;
    std::string detection_ref;

    bool operator==(const PiiPattern&) const = default;
};

struct RulePack {
    std::string pack_id;
    std::vector<PiiPattern> pii_patterns;
    bool gdpr_applies = false;
    std::optional<std::int64_t> default_retention_days;

    bool operator==(const RulePack&) const = default;
};

enum class AnnotationTag { BusinessRule, SlaHint, OwnerHint, Freeform };

std::string_view to_string(AnnotationTag t);
std::optional<AnnotationTag> annotation_tag_from(std::string_view name);

struct AnnotationNote {
    AnnotationTag tag = AnnotationTag::Freeform;
    std::string text;

    bool operator==(const AnnotationNote&) const = default;
};

struct AnnotationSet {
    std::vector<AnnotationNote> notes;

    bool operator==(const AnnotationSet&) const = default;
};

struct ContextBundle {
    TableMetadata metadata;
    RulePack rulepack;
    AnnotationSet annotations;
    std::string digest; // over the canonical rendering below
};

/// Reads `<catalog_root>/<dataset>.catalog`. Throws UsageError with a
/// positioned message on malformed input or a missing dataset.
TableMetadata fetch_metadata(const std::filesystem::path& catalog_root,
                             const std::string& dataset);

/// Parses a `.catalog` document (see README for the format).
TableMetadata parse_catalog(std::string_view text, const std::string& source_name);

/// Reads and parses a rule pack file. gdpr defaults to false when absent.
RulePack load_compliance(const std::filesystem::path& rulepack_path);

RulePack parse_rulepack(std::string_view text, const std::string& source_name);

/// One note per non-blank line; a leading `[tag]` marker selects the tag.
/// Throws UsageError on an unknown tag.
AnnotationSet collect_annotations(std::string_view notes_source);

/// Pure: identical inputs yield identical digests.
ContextBundle assemble_context(TableMetadata metadata, RulePack rulepack,
                               AnnotationSet annotations);

/// Canonical plain-text rendering of a bundle; digest input and prompt body.
std::string render_context(const TableMetadata& metadata, const RulePack& rulepack,
                           const AnnotationSet& annotations);

} // namespace meshgate
