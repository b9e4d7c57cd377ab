#include "doctest.h"
#include "support.hpp"

#include "xav/decompose.hpp"

using namespace xav;

namespace {

RegexRule rule(std::string_view p, std::uint32_t id = 0) { return parse_regex(p, id); }
Node tree(std::string_view p) { return parse_regex(p).tree.root; }

}  // namespace

TEST_CASE("long component classification") {
    CompileConfig cfg;
    CHECK(is_long_component(tree("[^\\n]{100}"), cfg));
    CHECK(is_long_component(tree(".*"), cfg));
    CHECK_FALSE(is_long_component(tree("[a-f0-9]{32}"), cfg));
    CHECK_FALSE(is_long_component(tree("[^\\n]{50}"), cfg));
    CHECK(is_long_component(tree("[^\\n]{51}"), cfg));
    CHECK_FALSE(is_long_component(tree("[a-z]*"), cfg));
}

TEST_CASE("splitting at top-level long components") {
    CompileConfig cfg;
    auto d = split_rule(rule("(ab|cd)e[^\\n]{100}"), cfg);
    REQUIRE(d.lsre_count() == 1);
    CHECK(d.lusre(1).tree.is_empty());
    CHECK(d.lsre(1).tree == tree("(ab|cd)e"));
    CHECK(d.lusre(2).tree == tree("[^\\n]{100}"));

    auto e = split_rule(rule("ab.*cd"), cfg);
    REQUIRE(e.lsre_count() == 2);
    CHECK(e.lsre(1).tree == tree("ab"));
    CHECK(e.lusre(2).tree == tree(".*"));
    CHECK(e.lsre(2).tree == tree("cd"));
    CHECK(e.lusre(3).tree.is_empty());

    auto f = split_rule(rule("abc"), cfg);
    REQUIRE(f.lsre_count() == 1);
    CHECK(f.lusre(1).tree.is_empty());
    CHECK(f.lusre(2).tree.is_empty());

    CHECK_THROWS_AS(split_rule(rule("(a.*b|c)d"), cfg), UnsupportedRule);
    CHECK_THROWS_AS(split_rule(rule(".*"), cfg), UnsupportedRule);
}

TEST_CASE("adjacent long components share one lusRE") {
    CompileConfig cfg;
    auto d = split_rule(rule("ab.*[^\\n]{60}cd"), cfg);
    REQUIRE(d.lsre_count() == 2);
    CHECK(d.lusre(2).tree == tree(".*[^\\n]{60}"));
}

TEST_CASE("ldRE extraction follows the worked examples") {
    CompileConfig cfg;
    auto hex = decompose(rule("user=[a-f0-9]{32}"), cfg);
    REQUIRE(hex.splits.size() == 1);
    const auto& s = hex.splits[0];
    // the widest literal-plus-class window wins before trimming
    CHECK(s.natural.to_pattern() == "user=[0-9a-f][0-9a-f]");
    CHECK(s.ldre.to_pattern() == "ser=");
    CHECK(s.front == tree("user="));
    CHECK(s.back == tree("[a-f0-9]{32}"));

    auto mic = decompose(rule("\\d{1,6}\\x00mic\\x7c"), cfg);
    REQUIRE(mic.splits.size() == 1);
    CHECK(mic.splits[0].natural.length() == 5);
    CHECK(mic.splits[0].natural.classes[0] == CharClass::single(0));
    CHECK(mic.splits[0].ldre.length() == 4);
    CHECK(mic.splits[0].ldre.to_pattern() == "mic\\|");
    CHECK_FALSE(mic.splits[0].has_back());
    CHECK(mic.splits[0].front == tree("\\d{1,6}\\x00mic\\x7c"));
}

TEST_CASE("unfriendly lsRE") {
    CompileConfig cfg;
    Fragment f{FragmentKind::LsRE, tree("[^\\n]{2}"), 1, false, false};
    auto x = extract_ldre(f, cfg);
    CHECK_FALSE(x.friendly);
    CHECK(x.best_probability == doctest::Approx((255.0 / 256) * (255.0 / 256)));
    CHECK_THROWS_AS(decompose(rule("[^\\n]{2}"), cfg), UnsupportedRule);
}

TEST_CASE("alternatives are distributed when no shared window exists") {
    CompileConfig cfg;
    auto d = decompose(rule("(abcd|wxyz)"), cfg);
    REQUIRE(d.splits.size() == 2);
    CHECK(d.splits[0].ldre.to_pattern() == "abcd");
    CHECK(d.splits[1].ldre.to_pattern() == "wxyz");
    CHECK(d.splits[0].fragment == 1);
    CHECK(d.splits[1].fragment == 1);
}

TEST_CASE("merging unfriendly fragments") {
    CompileConfig cfg;
    // S1 unfriendly: becomes part of R1
    auto a = decompose(rule("[^\\n]{2}.*abcd"), cfg);
    REQUIRE(a.rule.lsre_count() == 1);
    CHECK(a.rule.lusre(1).merged);
    CHECK(a.rule.lusre(1).tree == tree("[^\\n]{2}.*"));
    CHECK(a.splits[0].fragment == 1);

    // middle unfriendly: R2' = R2 S2 R3
    auto b = decompose(rule("abcd.*\\d.*wxyz"), cfg);
    REQUIRE(b.rule.lsre_count() == 2);
    CHECK(b.rule.lusre(2).tree == tree(".*\\d.*"));
    CHECK(b.splits[1].fragment == 2);

    auto c = decompose(rule("ab"), cfg);
    CHECK(c.rule.lsre_count() == 1);
    CHECK_FALSE(c.rule.lusre(1).merged);
}

TEST_CASE("recomposition preserves the language") {
    CompileConfig cfg;
    cfg.long_count = 2;
    cfg.long_population = 1;
    const char* pats[] = {"ab.*cd", "abcd.*b.*dcba", "a[ab]{3}cd", "(ab|cd)[abc]{4}dd"};
    for (const char* p : pats) {
        auto r = rule(p);
        DecomposedRule d;
        try {
            d = decompose(r, cfg).rule;
        } catch (const UnsupportedRule&) {
            continue;
        }
        Node back = recompose(d);
        for (const auto& s : xavtest::all_strings("abcd", 6)) {
            CHECK(xavtest::full_match(back, s) == xavtest::full_match(r.tree.root, s));
        }
    }
}

TEST_CASE("figure-3 style rule set") {
    CompileConfig cfg;
    auto a = decompose(rule("AUTH\\s[^\\n]{100}"), cfg);
    REQUIRE(a.splits[0].natural.length() == 5);
    CHECK(a.splits[0].natural.classes[4] == CharClass::space());
    CHECK(a.splits[0].ldre.to_pattern() == "AUTH");
    auto p = decompose(rule("PARTIAL.*\\x20\\d.*BODY"), cfg);
    REQUIRE(p.splits.size() == 2);
    CHECK(p.splits[0].natural.to_pattern() == "PARTIAL");
    CHECK(p.splits[1].natural.to_pattern() == "BODY");
    CHECK(p.rule.lusre(2).merged);
}
