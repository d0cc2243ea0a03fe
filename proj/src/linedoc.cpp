// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/linedoc.hpp"

#include <cctype>
#include <cstdio>

namespace meshgate::linedoc {

namespace {

constexpr int kMaxDepth = 32;

struct Line {
    int indent = 0;
    std::string_view content;
    int number = 0;
};

bool is_key_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

struct Parser {
    std::vector<Line> lines;
    std::size_t cur = 0;
    std::vector<Issue>& issues;
    bool failed = false;

    explicit Parser(std::string_view text, std::vector<Issue>& out) : issues(out)
    {
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view raw = (nl == std::string_view::npos)
                                       ? text.substr(pos)
                                       : text.substr(pos, nl - pos);
            ++number;
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
            std::size_t i = 0;
            while (i < raw.size() && raw[i] == ' ') ++i;
            if (i < raw.size() && raw[i] == '\t') {
                fail(number, "tab indentation is not allowed");
                return;
            }
            if (i < raw.size()) {
                lines.push_back({static_cast<int>(i), raw.substr(i), number});
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }

    void fail(int line, std::string message)
    {
        if (!failed) issues.push_back({line, std::move(message)});
        failed = true;
    }

    bool done() const { return failed || cur >= lines.size(); }

    static bool is_item_marker(std::string_view content)
    {
        return content == "-" || content.rfind("- ", 0) == 0;
    }

    Node parse_block(int indent, int depth)
    {
        Node node;
        if (depth > kMaxDepth) {
            fail(done() ? 0 : lines[cur].number, "nesting too deep");
            return node;
        }
        if (done()) return node;
        if (is_item_marker(lines[cur].content)) {
            return parse_list(indent, depth);
        }
        return parse_mapping(indent, depth, nullptr);
    }

    Node parse_list(int indent, int depth)
    {
        Node node;
        node.kind = NodeKind::List;
        node.line = lines[cur].number;
        while (!done() && lines[cur].indent == indent &&
               is_item_marker(lines[cur].content)) {
            const Line marker = lines[cur];
            ++cur;
            std::string_view rest =
                marker.content == "-" ? std::string_view{} : marker.content.substr(2);
            while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
            if (rest.empty()) {
                fail(marker.number, "empty list item");
                return node;
            }
            if (rest.find(':') == std::string_view::npos) {
                Node item;
                item.kind = NodeKind::Scalar;
                item.line = marker.number;
                item.scalar = std::string(rest);
                node.items.push_back(std::move(item));
                continue;
            }
            Line first{indent + 2, rest, marker.number};
            node.items.push_back(parse_mapping(indent + 2, depth + 1, &first));
            if (failed) return node;
        }
        check_trailing_indent(indent);
        return node;
    }

    Node parse_mapping(int indent, int depth, const Line* pending)
    {
        Node node;
        node.kind = NodeKind::Mapping;
        node.line = pending ? pending->number : lines[cur].number;
        bool first = pending != nullptr;
        while (true) {
            Line line{};
            if (first) {
                line = *pending;
                first = false;
            } else {
                if (done() || lines[cur].indent != indent ||
                    is_item_marker(lines[cur].content)) {
                    break;
                }
                line = lines[cur];
                ++cur;
            }
            std::size_t k = 0;
            while (k < line.content.size() && is_key_char(line.content[k])) ++k;
            if (k == 0 || k >= line.content.size() || line.content[k] != ':') {
                fail(line.number, "expected 'key:' or 'key: value'");
                return node;
            }
            std::string key(line.content.substr(0, k));
            for (const auto& [existing, unused] : node.entries) {
                (void)unused;
                if (existing == key) {
                    fail(line.number, "duplicate key: " + key);
                    return node;
                }
            }
            std::string_view rest = line.content.substr(k + 1);
            Node child;
            if (rest.empty()) {
                if (done() || lines[cur].indent != indent + 2) {
                    fail(line.number, "empty block after '" + key + ":'");
                    return node;
                }
                child = parse_block(indent + 2, depth + 1);
                if (failed) return node;
            } else {
                if (rest.front() != ' ') {
                    fail(line.number, "expected a space after ':'");
                    return node;
                }
                while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
                while (!rest.empty() && rest.back() == ' ') rest.remove_suffix(1);
                child.kind = NodeKind::Scalar;
                child.line = line.number;
                child.scalar = std::string(rest);
            }
            node.entries.emplace_back(std::move(key), std::move(child));
        }
        check_trailing_indent(indent);
        return node;
    }

    // A deeper-indented line after a block closes is always a structure error.
    void check_trailing_indent(int indent)
    {
        if (!failed && cur < lines.size() && lines[cur].indent > indent) {
            fail(lines[cur].number, "unexpected indentation");
        }
    }
};

void utf8_append(std::string& out, unsigned int cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

} // namespace

const Node* Node::find(std::string_view key) const
{
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

ParseResult parse(std::string_view text)
{
    ParseResult result;
    Parser parser(text, result.issues);
    if (parser.failed) return result;
    if (parser.lines.empty()) {
        result.issues.push_back({1, "empty document"});
        return result;
    }
    if (parser.lines.front().indent != 0) {
        result.issues.push_back({parser.lines.front().number,
                                 "document must start at column zero"});
        return result;
    }
    Node root = parser.parse_block(0, 0);
    if (!parser.failed && parser.cur < parser.lines.size()) {
        parser.fail(parser.lines[parser.cur].number, "unexpected indentation");
    }
    if (parser.failed) return result;
    result.root = std::move(root);
    return result;
}

std::optional<std::vector<std::string>> split_inline_list(std::string_view token)
{
    if (token.size() < 2 || token.front() != '[' || token.back() != ']')
        return std::nullopt;
    std::string_view body = token.substr(1, token.size() - 2);
    std::vector<std::string> out;
    std::string current;
    bool in_quotes = false;
    bool escaped = false;
    bool any = false;
    for (char c : body) {
        any = true;
        if (in_quotes) {
            current.push_back(c);
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_quotes = false;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            current.push_back(c);
        } else if (c == ',') {
            out.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (in_quotes) return std::nullopt;
    if (any) out.push_back(current);
    for (auto& element : out) {
        std::size_t b = element.find_first_not_of(' ');
        std::size_t e = element.find_last_not_of(' ');
        if (b == std::string::npos) return std::nullopt; // blank element
        element = element.substr(b, e - b + 1);
    }
    return out;
}

std::string quote(std::string_view text)
{
    std::string out = "\"";
    for (unsigned char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(static_cast<char>(c));
            }
        }
    }
    out.push_back('"');
    return out;
}

std::optional<std::string> unquote(std::string_view token)
{
    if (token.size() < 2 || token.front() != '"' || token.back() != '"')
        return std::nullopt;
    std::string_view body = token.substr(1, token.size() - 2);
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\') {
            if (c == '"') return std::nullopt; // bare quote inside token
            out.push_back(c);
            continue;
        }
        if (++i >= body.size()) return std::nullopt;
        switch (body[i]) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
            if (i + 4 >= body.size()) return std::nullopt;
            unsigned int cp = 0;
            for (int k = 0; k < 4; ++k) {
                char h = body[i + 1 + k];
                cp <<= 4;
                if (h >= '0' && h <= '9') cp |= static_cast<unsigned>(h - '0');
                else if (h >= 'a' && h <= 'f') cp |= static_cast<unsigned>(h - 'a' + 10);
                else if (h >= 'A' && h <= 'F') cp |= static_cast<unsigned>(h - 'A' + 10);
                else return std::nullopt;
            }
            i += 4;
            utf8_append(out, cp);
            break;
        }
        default: return std::nullopt;
        }
    }
    return out;
}

} // namespace meshgate::linedoc
