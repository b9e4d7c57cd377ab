#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xav/charclass.hpp"

namespace xav {

enum class NodeKind : std::uint8_t { Class, Concat, Alt, Repeat };

/// One regex component. A Concat with no children is the empty string.
struct Node {
    static constexpr std::uint32_t kInfinite = std::numeric_limits<std::uint32_t>::max();

    NodeKind kind = NodeKind::Concat;
    CharClass cls;               // Class only
    std::vector<Node> children;  // Concat, Alt, and Repeat (exactly one child)
    std::uint32_t min = 0;       // Repeat only
    std::uint32_t max = 0;       // Repeat only; kInfinite for unbounded

    static Node make_class(const CharClass& c) {
        Node n;
        n.kind = NodeKind::Class;
        n.cls = c;
        return n;
    }
    static Node make_literal(std::string_view text);
    static Node make_concat(std::vector<Node> children);
    static Node make_alt(std::vector<Node> children);
    static Node make_repeat(Node child, std::uint32_t min, std::uint32_t max);
    static Node empty() { return Node{}; }

    [[nodiscard]] bool is_empty() const { return kind == NodeKind::Concat && children.empty(); }
    [[nodiscard]] const Node& child() const { return children.front(); }

    friend bool operator==(const Node&, const Node&) = default;
};

/// Parsed rule body plus its rule-level anchors.
struct ComponentTree {
    Node root;
    bool leading_anchor = false;
    bool trailing_anchor = false;

    friend bool operator==(const ComponentTree&, const ComponentTree&) = default;
};

struct RegexRule {
    std::uint32_t id = 0;
    std::string source;
    ComponentTree tree;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, EmptyClass, Unsupported };

    ParseError(Kind kind, std::size_t position, const std::string& message);

    [[nodiscard]] Kind kind() const { return m_kind; }
    [[nodiscard]] std::size_t position() const { return m_position; }
    [[nodiscard]] const std::string& detail() const { return m_detail; }

private:
    Kind m_kind;
    std::size_t m_position;
    std::string m_detail;
};

/// Parses the supported regex subset. Throws ParseError.
RegexRule parse_regex(std::string_view pattern, std::uint32_t id = 0);

/// Flattens nested concatenations/alternations, collapses single-child nodes,
/// folds alternations of classes into one class and drops trivial repeats.
Node normalize(Node node);

/// Tree accepting exactly the reversed strings of `tree`; anchors swap sides.
ComponentTree reverse_tree(const ComponentTree& tree);
Node reverse_node(const Node& node);

/// Source text that parses back to the same normalized tree.
std::string to_pattern(const Node& node);
std::string to_pattern(const ComponentTree& tree);

/// Shortest and longest accepted lengths; longest is Node::kInfinite if unbounded.
std::uint32_t min_length(const Node& node);
std::uint32_t max_length(const Node& node);

/// Rule-set text: one regex per line; `#` comments and blank lines are skipped,
/// surrounding `/.../` delimiters stripped.
struct RuleLine {
    std::size_t line_number = 0;
    std::string pattern;
    std::string flags;  // trailing characters after a closing `/` delimiter
};
std::vector<RuleLine> read_rule_lines(std::string_view text);
std::vector<RuleLine> read_rule_file(const std::string& path);

}  // namespace xav
