#include "xav/regex.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace xav {

namespace {

constexpr std::uint32_t kMaxCount = 65535;

bool is_meta(std::uint8_t b) {
    switch (b) {
        case '\\': case '.': case '[': case ']': case '(': case ')': case '{': case '}':
        case '|': case '*': case '+': case '?': case '^': case '$': case '/':
            return true;
        default:
            return false;
    }
}

std::string hex_escape(std::uint8_t b) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s = "\\x";
    s += kDigits[b >> 4];
    s += kDigits[b & 0xf];
    return s;
}

std::string escape_literal(std::uint8_t b) {
    if (b < 0x20 || b >= 0x7f) {
        switch (b) {
            case '\n': return "\\n";
            case '\t': return "\\t";
            case '\r': return "\\r";
            default: return hex_escape(b);
        }
    }
    if (is_meta(b)) {
        return std::string("\\") + static_cast<char>(b);
    }
    return std::string(1, static_cast<char>(b));
}

std::string escape_in_class(std::uint8_t b) {
    if (b < 0x20 || b >= 0x7f) {
        return escape_literal(b);
    }
    if (b == '\\' || b == ']' || b == '[' || b == '^' || b == '-') {
        return std::string("\\") + static_cast<char>(b);
    }
    return std::string(1, static_cast<char>(b));
}

std::string class_items(const CharClass& c) {
    std::string out;
    unsigned b = 0;
    while (b < 256) {
        if (!c.contains(static_cast<std::uint8_t>(b))) {
            ++b;
            continue;
        }
        unsigned e = b;
        while (e + 1 < 256 && c.contains(static_cast<std::uint8_t>(e + 1))) {
            ++e;
        }
        out += escape_in_class(static_cast<std::uint8_t>(b));
        if (e == b + 1) {
            out += escape_in_class(static_cast<std::uint8_t>(e));
        } else if (e > b + 1) {
            out += '-';
            out += escape_in_class(static_cast<std::uint8_t>(e));
        }
        b = e + 1;
    }
    return out;
}

std::uint32_t sat_add(std::uint32_t a, std::uint32_t b) {
    if (a == Node::kInfinite || b == Node::kInfinite) {
        return Node::kInfinite;
    }
    std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return s >= Node::kInfinite ? Node::kInfinite - 1 : static_cast<std::uint32_t>(s);
}

std::uint32_t sat_mul(std::uint32_t a, std::uint32_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    if (a == Node::kInfinite || b == Node::kInfinite) {
        return Node::kInfinite;
    }
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    return p >= Node::kInfinite ? Node::kInfinite - 1 : static_cast<std::uint32_t>(p);
}

class Parser {
public:
    explicit Parser(std::string_view text, std::size_t offset) : m_text(text), m_offset(offset) {}

    Node parse_all() {
        Node n = parse_alt();
        if (m_pos < m_text.size()) {
            // Only a stray ')' can stop the top-level alternation early.
            fail(ParseError::Kind::Syntax, "unmatched ')'");
        }
        return n;
    }

    [[nodiscard]] bool top_level_alternation() const { return m_top_alt; }
    [[nodiscard]] bool leading_anchor() const { return m_leading; }
    [[nodiscard]] bool trailing_anchor() const { return m_trailing; }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg) const {
        throw ParseError(kind, m_offset + m_pos, msg);
    }

    [[nodiscard]] bool at_end() const { return m_pos >= m_text.size(); }
    [[nodiscard]] std::uint8_t peek(std::size_t ahead = 0) const {
        return static_cast<std::uint8_t>(m_text[m_pos + ahead]);
    }
    [[nodiscard]] bool has(std::size_t ahead) const { return m_pos + ahead < m_text.size(); }

    Node parse_alt() {
        std::vector<Node> alts;
        alts.push_back(parse_concat());
        while (!at_end() && peek() == '|') {
            if (m_depth == 0) {
                m_top_alt = true;
            }
            ++m_pos;
            alts.push_back(parse_concat());
        }
        if (alts.size() == 1) {
            return std::move(alts.front());
        }
        return Node::make_alt(std::move(alts));
    }

    Node parse_concat() {
        std::vector<Node> items;
        while (!at_end() && peek() != '|' && peek() != ')') {
            bool anchor = peek() == '^' || peek() == '$';
            Node atom = parse_atom();
            if (anchor) {
                if (!at_end() && (peek() == '*' || peek() == '+' || peek() == '?' || try_count().has_value)) {
                    fail(ParseError::Kind::Syntax, "anchor cannot be repeated");
                }
                continue;
            }
            items.push_back(parse_quantifiers(std::move(atom)));
        }
        return Node::make_concat(std::move(items));
    }

    Node parse_atom() {
        std::uint8_t c = peek();
        switch (c) {
            case '(':
                return parse_group();
            case '[':
                return parse_class();
            case '.':
                ++m_pos;
                return Node::make_class(CharClass::full());
            case '\\':
                return Node::make_class(parse_escape(false));
            case '*':
            case '+':
            case '?':
                fail(ParseError::Kind::Syntax, "nothing to repeat");
            case '^':
                if (m_depth == 0 && m_pos == 0) {
                    ++m_pos;
                    m_leading = true;
                    return Node::empty();
                }
                fail(ParseError::Kind::Unsupported, "'^' is only supported at the start of a rule");
            case '$':
                if (m_depth == 0 && m_pos + 1 == m_text.size()) {
                    ++m_pos;
                    m_trailing = true;
                    return Node::empty();
                }
                fail(ParseError::Kind::Unsupported, "'$' is only supported at the end of a rule");
            case '{':
                if (try_count().has_value) {
                    fail(ParseError::Kind::Syntax, "nothing to repeat");
                }
                [[fallthrough]];
            default:
                ++m_pos;
                return Node::make_class(CharClass::single(c));
        }
    }

    Node parse_group() {
        std::size_t open = m_pos;
        ++m_pos;
        if (!at_end() && peek() == '?') {
            if (has(1) && peek(1) == ':') {
                m_pos += 2;
            } else if (has(1) && (peek(1) == '=' || peek(1) == '!')) {
                fail(ParseError::Kind::Unsupported, "lookahead is not supported");
            } else if (has(2) && peek(1) == '<' && (peek(2) == '=' || peek(2) == '!')) {
                fail(ParseError::Kind::Unsupported, "lookbehind is not supported");
            } else if (has(1) && (peek(1) == '<' || peek(1) == 'P' || peek(1) == '\'')) {
                fail(ParseError::Kind::Unsupported, "named groups are not supported");
            } else {
                fail(ParseError::Kind::Unsupported, "inline options are not supported");
            }
        }
        ++m_depth;
        Node inner = parse_alt();
        --m_depth;
        if (at_end() || peek() != ')') {
            m_pos = open;
            fail(ParseError::Kind::Syntax, "unclosed group");
        }
        ++m_pos;
        return inner;
    }

    struct Count {
        bool has_value = false;
        std::uint32_t min = 0;
        std::uint32_t max = 0;
        std::size_t length = 0;
    };

    // Recognizes {m}, {m,}, {m,n} at the cursor without consuming it.
    [[nodiscard]] Count try_count() const {
        Count out;
        std::size_t i = m_pos;
        if (i >= m_text.size() || m_text[i] != '{') {
            return out;
        }
        ++i;
        auto read_number = [&](std::uint64_t& value) {
            std::size_t start = i;
            value = 0;
            while (i < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[i]))) {
                value = std::min<std::uint64_t>(value * 10 + static_cast<std::uint64_t>(m_text[i] - '0'),
                                                std::uint64_t{1} << 40);
                ++i;
            }
            return i > start;
        };
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        if (!read_number(lo)) {
            return out;
        }
        if (i < m_text.size() && m_text[i] == '}') {
            hi = lo;
        } else if (i < m_text.size() && m_text[i] == ',') {
            ++i;
            if (!read_number(hi)) {
                hi = Node::kInfinite;
            }
            if (i >= m_text.size() || m_text[i] != '}') {
                return out;
            }
        } else {
            return out;
        }
        out.has_value = true;
        out.min = static_cast<std::uint32_t>(std::min<std::uint64_t>(lo, Node::kInfinite - 1));
        out.max = hi == Node::kInfinite ? Node::kInfinite
                                        : static_cast<std::uint32_t>(std::min<std::uint64_t>(hi, Node::kInfinite - 1));
        out.length = i + 1 - m_pos;
        return out;
    }

    Node parse_quantifiers(Node atom) {
        bool quantified = false;
        while (!at_end()) {
            std::uint8_t c = peek();
            std::uint32_t lo = 0;
            std::uint32_t hi = 0;
            std::size_t len = 1;
            if (c == '*') {
                lo = 0;
                hi = Node::kInfinite;
            } else if (c == '+') {
                if (quantified) {
                    fail(ParseError::Kind::Unsupported, "possessive quantifiers are not supported");
                }
                lo = 1;
                hi = Node::kInfinite;
            } else if (c == '?') {
                if (quantified) {
                    ++m_pos;  // lazy modifier: same language
                    continue;
                }
                lo = 0;
                hi = 1;
            } else if (c == '{') {
                Count count = try_count();
                if (!count.has_value) {
                    break;
                }
                lo = count.min;
                hi = count.max;
                len = count.length;
                if (lo > hi) {
                    fail(ParseError::Kind::Syntax, "repetition minimum exceeds maximum");
                }
                if (lo > kMaxCount || (hi != Node::kInfinite && hi > kMaxCount)) {
                    fail(ParseError::Kind::Unsupported, "repetition count too large");
                }
            } else {
                break;
            }
            if (quantified) {
                fail(ParseError::Kind::Syntax, "nothing to repeat");
            }
            m_pos += len;
            atom = Node::make_repeat(std::move(atom), lo, hi);
            quantified = true;
        }
        return atom;
    }

    static int hex_value(std::uint8_t c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    // Cursor on the backslash. Returns the class the escape denotes.
    CharClass parse_escape(bool in_class) {
        std::size_t start = m_pos;
        ++m_pos;
        if (at_end()) {
            m_pos = start;
            fail(ParseError::Kind::Syntax, "trailing backslash");
        }
        std::uint8_t c = peek();
        ++m_pos;
        switch (c) {
            case 'd': return CharClass::digit();
            case 'D': return CharClass::digit().complement();
            case 's': return CharClass::space();
            case 'S': return CharClass::space().complement();
            case 'w': return CharClass::word();
            case 'W': return CharClass::word().complement();
            case 'n': return CharClass::single('\n');
            case 't': return CharClass::single('\t');
            case 'r': return CharClass::single('\r');
            case 'f': return CharClass::single('\f');
            case 'v': return CharClass::single('\v');
            case 'a': return CharClass::single(0x07);
            case 'e': return CharClass::single(0x1b);
            case '0': return CharClass::single(0x00);
            case 'x': {
                int value = 0;
                if (!at_end() && peek() == '{') {
                    ++m_pos;
                    int digits = 0;
                    while (!at_end() && hex_value(peek()) >= 0) {
                        value = value * 16 + hex_value(peek());
                        ++m_pos;
                        ++digits;
                        if (value > 0xff) {
                            m_pos = start;
                            fail(ParseError::Kind::Unsupported, "code points above \\xff are not supported");
                        }
                    }
                    if (digits == 0 || at_end() || peek() != '}') {
                        m_pos = start;
                        fail(ParseError::Kind::Syntax, "malformed \\x{...} escape");
                    }
                    ++m_pos;
                } else {
                    if (!has(1) || hex_value(peek()) < 0 || hex_value(peek(1)) < 0) {
                        m_pos = start;
                        fail(ParseError::Kind::Syntax, "\\x requires two hex digits");
                    }
                    value = hex_value(peek()) * 16 + hex_value(peek(1));
                    m_pos += 2;
                }
                return CharClass::single(static_cast<std::uint8_t>(value));
            }
            case 'b':
                if (in_class) {
                    return CharClass::single(0x08);
                }
                m_pos = start;
                fail(ParseError::Kind::Unsupported, "word boundaries are not supported");
            default:
                break;
        }
        if (c >= '1' && c <= '9') {
            m_pos = start;
            fail(ParseError::Kind::Unsupported, "backreferences are not supported");
        }
        if (std::isalnum(c)) {
            m_pos = start;
            fail(ParseError::Kind::Unsupported, std::string("unsupported escape \\") + static_cast<char>(c));
        }
        return CharClass::single(c);
    }

    bool try_posix_class(CharClass& out) {
        static const std::pair<std::string_view, CharClass (*)()> kNames[] = {
            {"alpha", [] { CharClass c = CharClass::range('a', 'z'); c |= CharClass::range('A', 'Z'); return c; }},
            {"digit", [] { return CharClass::digit(); }},
            {"alnum", [] { CharClass c = CharClass::word(); c.remove('_'); return c; }},
            {"space", [] { return CharClass::space(); }},
            {"upper", [] { return CharClass::range('A', 'Z'); }},
            {"lower", [] { return CharClass::range('a', 'z'); }},
            {"xdigit", [] { CharClass c = CharClass::digit(); c |= CharClass::range('a', 'f'); c |= CharClass::range('A', 'F'); return c; }},
            {"punct", [] {
                 CharClass c;
                 for (unsigned b = 0x21; b < 0x7f; ++b) {
                     if (!std::isalnum(static_cast<int>(b))) c.add(static_cast<std::uint8_t>(b));
                 }
                 return c;
             }},
            {"print", [] { return CharClass::range(0x20, 0x7e); }},
            {"graph", [] { return CharClass::range(0x21, 0x7e); }},
            {"cntrl", [] { CharClass c = CharClass::range(0x00, 0x1f); c.add(0x7f); return c; }},
            {"blank", [] { CharClass c = CharClass::single(' '); c.add('\t'); return c; }},
            {"word", [] { return CharClass::word(); }},
        };
        if (!has(1) || peek() != '[' || peek(1) != ':') {
            return false;
        }
        std::string_view rest = m_text.substr(m_pos + 2);
        std::size_t close = rest.find(":]");
        if (close == std::string_view::npos) {
            return false;
        }
        std::string_view name = rest.substr(0, close);
        for (const auto& [n, make] : kNames) {
            if (n == name) {
                out = make();
                m_pos += 2 + close + 2;
                return true;
            }
        }
        fail(ParseError::Kind::Unsupported, "unknown POSIX class");
    }

    Node parse_class() {
        std::size_t open = m_pos;
        ++m_pos;
        bool negate = false;
        if (!at_end() && peek() == '^') {
            negate = true;
            ++m_pos;
        }
        CharClass cls;
        bool first = true;
        while (true) {
            if (at_end()) {
                m_pos = open;
                fail(ParseError::Kind::Syntax, "unclosed character class");
            }
            std::uint8_t c = peek();
            if (c == ']' && !first) {
                ++m_pos;
                break;
            }
            first = false;
            CharClass posix;
            if (try_posix_class(posix)) {
                cls |= posix;
                continue;
            }
            // One item: a single byte (may start a range) or an escaped class.
            std::uint8_t lo = 0;
            bool single = true;
            if (c == '\\') {
                CharClass e = parse_escape(true);
                if (e.population() == 1) {
                    lo = e.first();
                } else {
                    cls |= e;
                    single = false;
                }
            } else {
                lo = c;
                ++m_pos;
            }
            if (!single) {
                continue;
            }
            if (has(1) && peek() == '-' && peek(1) != ']') {
                std::size_t dash = m_pos;
                ++m_pos;
                std::uint8_t hi = 0;
                if (peek() == '\\') {
                    CharClass e = parse_escape(true);
                    if (e.population() != 1) {
                        m_pos = dash;
                        fail(ParseError::Kind::Syntax, "invalid range endpoint");
                    }
                    hi = e.first();
                } else {
                    hi = peek();
                    ++m_pos;
                }
                if (hi < lo) {
                    m_pos = dash;
                    fail(ParseError::Kind::Syntax, "reversed character range");
                }
                cls |= CharClass::range(lo, hi);
            } else {
                cls.add(lo);
            }
        }
        if (negate) {
            cls = cls.complement();
        }
        if (cls.empty()) {
            m_pos = open;
            fail(ParseError::Kind::EmptyClass, "character class matches nothing");
        }
        return Node::make_class(cls);
    }

    std::string_view m_text;
    std::size_t m_offset;
    std::size_t m_pos = 0;
    int m_depth = 0;
    bool m_top_alt = false;
    bool m_leading = false;
    bool m_trailing = false;
};

}  // namespace

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error("position " + std::to_string(position) + ": " + message),
      m_kind(kind),
      m_position(position),
      m_detail(message) {}

Node Node::make_literal(std::string_view text) {
    if (text.size() == 1) {
        return make_class(CharClass::single(static_cast<std::uint8_t>(text[0])));
    }
    std::vector<Node> items;
    items.reserve(text.size());
    for (char c : text) {
        items.push_back(make_class(CharClass::single(static_cast<std::uint8_t>(c))));
    }
    return make_concat(std::move(items));
}

Node Node::make_concat(std::vector<Node> children) {
    Node n;
    n.kind = NodeKind::Concat;
    n.children = std::move(children);
    return n;
}

Node Node::make_alt(std::vector<Node> children) {
    Node n;
    n.kind = NodeKind::Alt;
    n.children = std::move(children);
    return n;
}

Node Node::make_repeat(Node child, std::uint32_t min, std::uint32_t max) {
    Node n;
    n.kind = NodeKind::Repeat;
    n.min = min;
    n.max = max;
    n.children.push_back(std::move(child));
    return n;
}

std::string CharClass::to_pattern() const {
    if (is_full()) {
        return ".";
    }
    if (population() == 1) {
        return escape_literal(first());
    }
    if (population() > 128) {
        return "[^" + class_items(complement()) + "]";
    }
    return "[" + class_items(*this) + "]";
}

RegexRule parse_regex(std::string_view pattern, std::uint32_t id) {
    if (pattern.empty()) {
        throw ParseError(ParseError::Kind::Syntax, 0, "empty pattern");
    }
    RegexRule rule;
    rule.id = id;
    rule.source = std::string(pattern);

    Parser parser(pattern, 0);
    Node root = parser.parse_all();
    rule.tree.leading_anchor = parser.leading_anchor();
    rule.tree.trailing_anchor = parser.trailing_anchor();
    if (parser.top_level_alternation() && (rule.tree.leading_anchor || rule.tree.trailing_anchor)) {
        throw ParseError(ParseError::Kind::Unsupported, 0, "anchors on a top-level alternation are ambiguous");
    }
    rule.tree.root = normalize(std::move(root));
    return rule;
}

Node normalize(Node node) {
    switch (node.kind) {
        case NodeKind::Class:
            return node;
        case NodeKind::Concat: {
            std::vector<Node> out;
            for (Node& c : node.children) {
                Node n = normalize(std::move(c));
                if (n.kind == NodeKind::Concat) {
                    for (Node& g : n.children) {
                        out.push_back(std::move(g));
                    }
                } else {
                    out.push_back(std::move(n));
                }
            }
            if (out.size() == 1) {
                return std::move(out.front());
            }
            node.children = std::move(out);
            return node;
        }
        case NodeKind::Alt: {
            std::vector<Node> flat;
            for (Node& c : node.children) {
                Node n = normalize(std::move(c));
                if (n.kind == NodeKind::Alt) {
                    for (Node& g : n.children) {
                        flat.push_back(std::move(g));
                    }
                } else {
                    flat.push_back(std::move(n));
                }
            }
            std::vector<Node> out;
            std::size_t class_slot = static_cast<std::size_t>(-1);
            for (Node& n : flat) {
                if (n.kind == NodeKind::Class) {
                    if (class_slot == static_cast<std::size_t>(-1)) {
                        class_slot = out.size();
                        out.push_back(std::move(n));
                    } else {
                        out[class_slot].cls |= n.cls;
                    }
                } else {
                    out.push_back(std::move(n));
                }
            }
            if (out.size() == 1) {
                return std::move(out.front());
            }
            node.children = std::move(out);
            return node;
        }
        case NodeKind::Repeat: {
            Node child = normalize(std::move(node.children.front()));
            if (node.max == 0 || child.is_empty()) {
                return Node::empty();
            }
            if (node.min == 1 && node.max == 1) {
                return child;
            }
            node.children.front() = std::move(child);
            return node;
        }
    }
    return node;
}

Node reverse_node(const Node& node) {
    switch (node.kind) {
        case NodeKind::Class:
            return node;
        case NodeKind::Concat: {
            Node out = node;
            std::reverse(out.children.begin(), out.children.end());
            for (Node& c : out.children) {
                c = reverse_node(c);
            }
            return out;
        }
        case NodeKind::Alt:
        case NodeKind::Repeat: {
            Node out = node;
            for (Node& c : out.children) {
                c = reverse_node(c);
            }
            return out;
        }
    }
    return node;
}

ComponentTree reverse_tree(const ComponentTree& tree) {
    ComponentTree out;
    out.root = reverse_node(tree.root);
    out.leading_anchor = tree.trailing_anchor;
    out.trailing_anchor = tree.leading_anchor;
    return out;
}

std::string to_pattern(const Node& node) {
    switch (node.kind) {
        case NodeKind::Class:
            return node.cls.to_pattern();
        case NodeKind::Concat: {
            if (node.children.empty()) {
                return "()";
            }
            std::string out;
            for (const Node& c : node.children) {
                if (c.kind == NodeKind::Alt || c.kind == NodeKind::Concat) {
                    out += "(" + to_pattern(c) + ")";
                } else {
                    out += to_pattern(c);
                }
            }
            return out;
        }
        case NodeKind::Alt: {
            std::string out;
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i > 0) {
                    out += '|';
                }
                const Node& c = node.children[i];
                out += c.kind == NodeKind::Alt ? "(" + to_pattern(c) + ")" : to_pattern(c);
            }
            return out;
        }
        case NodeKind::Repeat: {
            const Node& c = node.child();
            std::string out = c.kind == NodeKind::Class ? to_pattern(c) : "(" + to_pattern(c) + ")";
            if (node.min == 0 && node.max == Node::kInfinite) {
                out += '*';
            } else if (node.min == 1 && node.max == Node::kInfinite) {
                out += '+';
            } else if (node.min == 0 && node.max == 1) {
                out += '?';
            } else if (node.min == node.max) {
                out += "{" + std::to_string(node.min) + "}";
            } else if (node.max == Node::kInfinite) {
                out += "{" + std::to_string(node.min) + ",}";
            } else {
                out += "{" + std::to_string(node.min) + "," + std::to_string(node.max) + "}";
            }
            return out;
        }
    }
    return {};
}

std::string to_pattern(const ComponentTree& tree) {
    std::string body = to_pattern(tree.root);
    if (tree.root.kind == NodeKind::Alt && (tree.leading_anchor || tree.trailing_anchor)) {
        body = "(" + body + ")";
    }
    return (tree.leading_anchor ? "^" : "") + body + (tree.trailing_anchor ? "$" : "");
}

std::uint32_t min_length(const Node& node) {
    switch (node.kind) {
        case NodeKind::Class:
            return 1;
        case NodeKind::Concat: {
            std::uint32_t total = 0;
            for (const Node& c : node.children) {
                total = sat_add(total, min_length(c));
            }
            return total;
        }
        case NodeKind::Alt: {
            std::uint32_t best = Node::kInfinite;
            for (const Node& c : node.children) {
                best = std::min(best, min_length(c));
            }
            return best;
        }
        case NodeKind::Repeat:
            return sat_mul(node.min, min_length(node.child()));
    }
    return 0;
}

std::uint32_t max_length(const Node& node) {
    switch (node.kind) {
        case NodeKind::Class:
            return 1;
        case NodeKind::Concat: {
            std::uint32_t total = 0;
            for (const Node& c : node.children) {
                total = sat_add(total, max_length(c));
            }
            return total;
        }
        case NodeKind::Alt: {
            std::uint32_t best = 0;
            for (const Node& c : node.children) {
                best = std::max(best, max_length(c));
            }
            return best;
        }
        case NodeKind::Repeat: {
            std::uint32_t inner = max_length(node.child());
            if (inner == 0) {
                return 0;
            }
            return sat_mul(node.max, inner);
        }
    }
    return 0;
}

std::vector<RuleLine> read_rule_lines(std::string_view text) {
    std::vector<RuleLine> out;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        std::string_view line = text.substr(pos, nl - pos);
        ++line_number;
        pos = nl + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        bool blank = std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (blank || line.front() == '#') {
            continue;
        }
        RuleLine rl;
        rl.line_number = line_number;
        if (line.size() >= 2 && line.front() == '/') {
            std::size_t last = line.rfind('/');
            if (last > 0) {
                rl.flags = std::string(line.substr(last + 1));
                line = line.substr(1, last - 1);
            }
        }
        rl.pattern = std::string(line);
        out.push_back(std::move(rl));
    }
    return out;
}

std::vector<RuleLine> read_rule_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open rule file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_rule_lines(ss.str());
}

}  // namespace xav
