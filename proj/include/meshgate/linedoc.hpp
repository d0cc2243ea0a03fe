// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meshgate::linedoc {

// Strict line-oriented document tree: two-space indentation, `key: value`
// scalars, `key:` block openers, and `- ` list items. This is the substrate
// for the contract document format; it is deliberately not a general YAML
// parser.

enum class NodeKind { Scalar, Mapping, List };

struct Node {
    NodeKind kind = NodeKind::Scalar;
    int line = 0;
    std::string scalar;                                // Scalar
    std::vector<std::pair<std::string, Node>> entries; // Mapping
    std::vector<Node> items;                           // List

    const Node* find(std::string_view key) const;
};

struct Issue {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<Node> root;
    std::vector<Issue> issues;

    bool ok() const { return root.has_value() && issues.empty(); }
};

/// Parses a document into a tree; never throws. On failure `root` is empty
/// and `issues` is non-empty.
ParseResult parse(std::string_view text);

/// Splits an inline list token `[a, "b, c", d]` into element tokens.
/// Respects double quotes; nullopt on malformed input.
std::optional<std::vector<std::string>> split_inline_list(std::string_view token);

/// Encodes arbitrary text as a double-quoted token with `\"`, `\\`, `\n`,
/// `\r`, `\t` and `\u00XX` escapes. UTF-8 passes through untouched.
std::string quote(std::string_view text);

/// Decodes a quoted token produced by `quote`; nullopt on malformed input.
std::optional<std::string> unquote(std::string_view token);

} // namespace meshgate::linedoc
