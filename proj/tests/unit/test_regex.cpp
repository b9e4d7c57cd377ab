#include "doctest.h"
#include "support.hpp"

#include "xav/regex.hpp"

using namespace xav;

TEST_CASE("component tree of a grouped alternation with a counted class") {
    auto t = xavtest::ptree("(ab|cd)e[^\\n]{100}");
    REQUIRE(t.root.kind == NodeKind::Concat);
    REQUIRE(t.root.children.size() == 3);
    const Node& alt = t.root.children[0];
    REQUIRE(alt.kind == NodeKind::Alt);
    CHECK(alt.children[0] == Node::make_literal("ab"));
    CHECK(alt.children[1] == Node::make_literal("cd"));
    CHECK(t.root.children[1] == Node::make_literal("e"));
    const Node& rep = t.root.children[2];
    REQUIRE(rep.kind == NodeKind::Repeat);
    CHECK(rep.min == 100);
    CHECK(rep.max == 100);
    CHECK(rep.child().cls.population() == 255);
    CHECK_FALSE(rep.child().cls.contains('\n'));
    CHECK_FALSE(t.leading_anchor);
    CHECK_FALSE(t.trailing_anchor);
}

TEST_CASE("single literal") {
    auto t = xavtest::ptree("a");
    CHECK(t.root.kind == NodeKind::Class);
    CHECK(t.root.cls == CharClass::single('a'));
    CHECK_FALSE(t.leading_anchor);
}

TEST_CASE("a{2,4} accepts exactly aa, aaa, aaaa over {a,b}") {
    auto t = xavtest::ptree("a{2,4}");
    REQUIRE(t.root.kind == NodeKind::Repeat);
    CHECK(t.root.min == 2);
    CHECK(t.root.max == 4);
    std::vector<std::string> accepted;
    for (const auto& s : xavtest::all_strings("ab", 5)) {
        if (xavtest::full_match(t.root, s)) {
            accepted.push_back(s);
        }
    }
    CHECK(accepted == std::vector<std::string>{"aa", "aaa", "aaaa"});
}

TEST_CASE("anchors") {
    auto t = xavtest::ptree("^abc$");
    CHECK(t.leading_anchor);
    CHECK(t.trailing_anchor);
    CHECK(t.root == Node::make_literal("abc"));
    auto u = xavtest::ptree("a\\$");
    CHECK_FALSE(u.trailing_anchor);
    CHECK(u.root == Node::make_literal("a$"));
    auto v = xavtest::ptree("[$]");
    CHECK_FALSE(v.trailing_anchor);
    CHECK_THROWS_AS(xavtest::ptree("^a|b"), ParseError);
    CHECK_THROWS_AS(xavtest::ptree("a^b"), ParseError);
}

TEST_CASE("escapes and classes") {
    CHECK(xavtest::ptree("\\x41").root == Node::make_literal("A"));
    CHECK(xavtest::ptree("\\d").root.cls == CharClass::digit());
    CHECK(xavtest::ptree("\\s").root.cls == CharClass::space());
    CHECK(xavtest::ptree("[^a]").root.cls.population() == 255);
    CHECK(xavtest::ptree("[a-c]").root.cls.population() == 3);
    CHECK(xavtest::ptree("[]a]").root.cls.contains(']'));
    CHECK(xavtest::ptree("[[:digit:]x]").root.cls.population() == 11);
    CHECK(xavtest::ptree(".").root.cls.is_full());
    CHECK(xavtest::ptree("\\.").root == Node::make_literal("."));
}

TEST_CASE("quantifier forms") {
    CHECK(xavtest::ptree("a*").root.max == Node::kInfinite);
    CHECK(xavtest::ptree("a+").root.min == 1);
    CHECK(xavtest::ptree("a?").root.max == 1);
    CHECK(xavtest::ptree("a{3}").root.min == 3);
    CHECK(xavtest::ptree("a{3,}").root.max == Node::kInfinite);
    CHECK(xavtest::ptree("a*?").root.max == Node::kInfinite);
    CHECK(xavtest::ptree("a{,").root == Node::make_literal("a{,"));
    CHECK(xavtest::ptree("a{1}").root == Node::make_literal("a"));
}

TEST_CASE("parse errors carry kind and position") {
    auto kind_of = [](std::string_view p) {
        try {
            xavtest::ptree(p);
        } catch (const ParseError& e) {
            return e.kind();
        }
        FAIL("expected ParseError for " << p);
        return ParseError::Kind::Syntax;
    };
    CHECK(kind_of("(ab") == ParseError::Kind::Syntax);
    CHECK(kind_of("ab)") == ParseError::Kind::Syntax);
    CHECK(kind_of("*a") == ParseError::Kind::Syntax);
    CHECK(kind_of("a{3,2}") == ParseError::Kind::Syntax);
    CHECK(kind_of("[z-a]") == ParseError::Kind::Syntax);
    CHECK(kind_of("[^\\x00-\\xff]") == ParseError::Kind::EmptyClass);
    CHECK(kind_of("(?=a)") == ParseError::Kind::Unsupported);
    CHECK(kind_of("(a)\\1") == ParseError::Kind::Unsupported);
    CHECK(kind_of("a\\b") == ParseError::Kind::Unsupported);
    CHECK(kind_of("") == ParseError::Kind::Syntax);
    try {
        xavtest::ptree("ab(c");
    } catch (const ParseError& e) {
        CHECK(e.position() >= 2);
    }
}

TEST_CASE("reverse") {
    auto t = xavtest::ptree("user=[a-f0-9]{32}");
    auto r = reverse_tree(t);
    CHECK(to_pattern(r) == to_pattern(xavtest::ptree("[a-f0-9]{32}=resu")));
    CHECK(reverse_node(Node::make_class(CharClass::single('a'))) == Node::make_class(CharClass::single('a')));
    auto a = xavtest::ptree("^ab");
    auto ra = reverse_tree(a);
    CHECK(ra.trailing_anchor);
    CHECK_FALSE(ra.leading_anchor);
}

TEST_CASE("reverse is an involution and reverses the language") {
    const char* pats[] = {"(ab|c)d*", "a(b|cd){1,2}", "a?b+c", "(a|bc)(d|ef)"};
    for (const char* p : pats) {
        auto t = xavtest::ptree(p);
        Node r = reverse_node(t.root);
        CHECK(reverse_node(r) == t.root);
        for (const auto& s : xavtest::all_strings("abcdef", 4)) {
            std::string rs(s.rbegin(), s.rend());
            CHECK(xavtest::full_match(t.root, s) == xavtest::full_match(r, rs));
        }
    }
}

TEST_CASE("to_pattern round-trips through the parser") {
    const char* pats[] = {"(ab|cd)e[^\\n]{100}", "a.*b", "\\x00mic\\x7c", "[a-f0-9]{32}", "a{2,}b?", "()", "(a|)b"};
    for (const char* p : pats) {
        auto t = xavtest::ptree(p);
        CHECK(xavtest::ptree(to_pattern(t)).root == t.root);
    }
}

TEST_CASE("normalization") {
    CHECK(xavtest::ptree("a|b|c").root.kind == NodeKind::Class);
    CHECK(xavtest::ptree("a|b|c").root.cls.population() == 3);
    CHECK(xavtest::ptree("((ab)c)").root == Node::make_literal("abc"));
    CHECK(xavtest::ptree("a{0}b").root == Node::make_literal("b"));
}

TEST_CASE("rule files") {
    auto lines = read_rule_lines("# comment\n\nabc\r\n/de+f/i\n");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].pattern == "abc");
    CHECK(lines[0].line_number == 3);
    CHECK(lines[1].pattern == "de+f");
    CHECK(lines[1].flags == "i");
}
