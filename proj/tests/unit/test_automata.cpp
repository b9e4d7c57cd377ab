#include "doctest.h"
#include "support.hpp"

#include <random>

#include "xav/automata.hpp"

using namespace xav;

namespace {

Node tree(std::string_view p) { return parse_regex(p).tree.root; }

Dfa dfa_of(std::vector<std::string_view> pats, bool min = true) {
    std::vector<NfaPattern> ps;
    for (std::size_t i = 0; i < pats.size(); ++i) {
        ps.push_back({tree(pats[i]), static_cast<std::uint32_t>(i)});
    }
    Dfa d = determinize(thompson(ps));
    return min ? minimize(d) : d;
}

std::vector<std::uint32_t> labels_of(const Dfa& d, std::string_view s) {
    auto b = xavtest::bytes(s);
    return d.run(b);
}

LsReSplit split(std::string_view front, std::string_view back = "", std::uint32_t id = 0) {
    LsReSplit s;
    s.lsre_id = id;
    s.front = tree(front);
    if (!back.empty()) {
        s.back = tree(back);
    }
    return s;
}

}  // namespace

TEST_CASE("thompson of a single literal") {
    Nfa n = thompson(std::vector<NfaPattern>{{tree("a"), 0}});
    CHECK(n.size() == 2);
    CHECK(n.transition_count() == 1);
}

TEST_CASE("thompson respects the state cap") {
    CHECK_THROWS_AS(thompson(std::vector<NfaPattern>{{tree("(abc){1000}"), 0}}, 2000), StateExplosion);
}

TEST_CASE("a{2,4} over {a,b}") {
    Dfa d = dfa_of({"a{2,4}"});
    for (const auto& s : xavtest::all_strings("ab", 5)) {
        bool want = s == "aa" || s == "aaa" || s == "aaaa";
        CHECK(d.run(xavtest::bytes(s)).empty() == !want);
    }
}

TEST_CASE("anchored abc has four live states and a dead state") {
    Dfa d = dfa_of({"abc"});
    CHECK(d.size() == 5);
    CHECK(d.start() == 1);
    for (int b = 0; b < 256; ++b) {
        CHECK(d.next(0, static_cast<std::uint8_t>(b)) == 0);
    }
    CHECK(d.accepts[0].empty());
}

TEST_CASE("no patterns gives the dead-only DFA") {
    Nfa n;
    Dfa d = determinize(n);
    CHECK(d.size() == 1);
    CHECK(d.start() == 0);
    CHECK(minimize(d).size() == 1);
    CHECK(compile_dfa({}, CompileConfig{}).size() == 1);
}

TEST_CASE("minimization merges duplicated branches") {
    Dfa raw = dfa_of({"ab|ab"}, false);
    Dfa m = minimize(raw);
    CHECK(m.size() == 4);
    for (const auto& s : xavtest::all_strings("ab", 6)) {
        CHECK(labels_of(raw, s) == labels_of(m, s));
    }
    CHECK(minimize(m).size() == m.size());
}

TEST_CASE("language preservation per label") {
    std::vector<std::string_view> pats{"a(b|c)*", "(ab|ba){1,3}", "a?b?c", "[ab]{2}c+", "(a|bb)(c|)"};
    Dfa raw = dfa_of(pats, false);
    Dfa m = minimize(raw);
    CHECK(m.size() <= raw.size());
    for (const auto& s : xavtest::all_strings("abc", 7)) {
        std::vector<std::uint32_t> want;
        for (std::size_t i = 0; i < pats.size(); ++i) {
            if (xavtest::full_match(tree(pats[i]), s)) {
                want.push_back(static_cast<std::uint32_t>(i));
            }
        }
        CHECK(labels_of(raw, s) == want);
        CHECK(labels_of(m, s) == want);
    }
}

TEST_CASE("sampled language preservation on wider inputs") {
    std::vector<std::string_view> pats{"\\d{1,6}\\x00mic\\x7c", "[^\\n]{3}x", "user=[a-f0-9]{4}"};
    Dfa m = dfa_of(pats);
    std::mt19937_64 rng(11);
    const std::string alpha = "0123456789\nmicx|user=abf\x00";
    for (int t = 0; t < 10000; ++t) {
        std::string s;
        std::size_t len = rng() % 12;
        for (std::size_t i = 0; i < len; ++i) {
            s.push_back(alpha[rng() % alpha.size()]);
        }
        std::vector<std::uint32_t> want;
        for (std::size_t i = 0; i < pats.size(); ++i) {
            if (xavtest::full_match(tree(pats[i]), s)) {
                want.push_back(static_cast<std::uint32_t>(i));
            }
        }
        REQUIRE(labels_of(m, s) == want);
    }
}

TEST_CASE("determinize reports the partial count on explosion") {
    try {
        Nfa n = thompson(std::vector<NfaPattern>{{tree("[ab]*a[ab]{12}"), 0}});
        determinize(n, 1000);
        FAIL("expected StateExplosion");
    } catch (const StateExplosion& e) {
        CHECK(e.partial_states() > 1000);
    }
}

TEST_CASE("compressed lookup equals dense lookup") {
    for (auto pats : {std::vector<std::string_view>{"abc"}, std::vector<std::string_view>{"[a-f0-9]{32}", "x.*y"},
                      std::vector<std::string_view>{"(ab|cd)e[^\\n]{10}"}}) {
        Dfa d = dfa_of(pats);
        CompressedStt c(d);
        for (std::uint32_t s = 0; s < d.size(); ++s) {
            for (int b = 0; b < 256; ++b) {
                REQUIRE(c.next(s, static_cast<std::uint8_t>(b)) == d.next(s, static_cast<std::uint8_t>(b)));
            }
        }
        CHECK(c.compression_ratio() < 1.0);
    }
}

TEST_CASE("compressed lookup on a random sparse DFA") {
    std::mt19937_64 rng(5);
    Dfa d;
    const std::uint32_t n = 1000;
    d.num_classes = 256;
    for (int b = 0; b < 256; ++b) {
        d.byte_class[b] = static_cast<std::uint8_t>(b);
    }
    d.table.assign(static_cast<std::size_t>(n) * 256, 0);
    d.accepts.resize(n);
    d.starts = {1};
    for (std::uint32_t s = 1; s < n; ++s) {
        std::uint32_t succ[8];
        for (auto& x : succ) {
            x = static_cast<std::uint32_t>(rng() % n);
        }
        for (int b = 0; b < 256; ++b) {
            d.table[s * 256 + b] = rng() % 3 == 0 ? 0 : succ[rng() % 8];
        }
    }
    CompressedStt c(d);
    for (int t = 0; t < 1000000; ++t) {
        auto s = static_cast<std::uint32_t>(rng() % n);
        auto b = static_cast<std::uint8_t>(rng());
        REQUIRE(c.next(s, b) == d.next(s, b));
    }
}

TEST_CASE("dead-only STT") {
    CompressedStt c(Dfa::empty());
    CHECK(c.size() == 1);
    CHECK(c.next(0, 'a') == 0);
    CHECK(c.compression_ratio() < 0.05);
}

TEST_CASE("STT serialization round-trips") {
    CompressedStt c(dfa_of({"user=", "x[^\\n]{5}"}));
    auto blob = c.serialize();
    CHECK(CompressedStt::deserialize(blob) == c);
    blob.resize(blob.size() - 1);
    CHECK_THROWS_AS(CompressedStt::deserialize(blob), FormatError);
}

TEST_CASE("reverse thread from the end of user=") {
    Dfa r = build_reverse_dfa({split("user=")}, CompileConfig{});
    CHECK(r.run(xavtest::bytes("=resu")) == std::vector<std::uint32_t>{0});
    CompressedStt c(r);
    auto data = xavtest::bytes("xuser=");
    auto t = run_thread(c, data, 5, Direction::Reverse);
    REQUIRE(t.accepts.size() == 1);
    CHECK(t.accepts[0] == ThreadAccept{0, 5, 1, 6});
    CHECK(t.transitions == 6);
    auto edge = xavtest::bytes("user=");
    CHECK(run_thread(c, edge, 4, Direction::Reverse).transitions == 5);
    auto dead = xavtest::bytes("user!");
    auto d = run_thread(c, dead, 4, Direction::Reverse);
    CHECK(d.accepts.empty());
    CHECK(d.transitions == 1);
}

TEST_CASE("reverse DFA over no splits is dead-only") {
    CHECK(build_reverse_dfa({}, CompileConfig{}).size() == 1);
}

TEST_CASE("access depth of length-2 fronts is at most 3") {
    CompressedStt c(build_reverse_dfa({split("ab", "", 0), split("cd", "", 1)}, CompileConfig{}));
    std::mt19937_64 rng(2);
    std::vector<std::uint8_t> data(4000);
    for (auto& b : data) {
        b = static_cast<std::uint8_t>("abcd"[rng() % 4]);
    }
    std::size_t max_depth = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        max_depth = std::max(max_depth, run_thread(c, data, i, Direction::Reverse).transitions);
    }
    CHECK(max_depth == 3);
}

TEST_CASE("forward DFA over back parts") {
    auto f = build_forward_dfa({split("user=", "[a-f0-9]{32}", 0)}, CompileConfig{});
    REQUIRE(f.backs.size() == 1);
    CompressedStt c(f.dfa);
    auto data = xavtest::bytes(std::string(33, 'a'));
    auto t = run_thread(c, data, 0, Direction::Forward, f.entry(0));
    REQUIRE(t.accepts.size() == 1);
    CHECK(t.accepts[0].depth == 32);
    CHECK(t.transitions == 33);

    auto empty = build_forward_dfa({split("abc")}, CompileConfig{});
    CHECK(empty.backs.empty());
    CHECK(empty.dfa.size() == 1);
    CHECK(empty.back_of_split == std::vector<std::int32_t>{-1});
}

TEST_CASE("identical back parts are merged") {
    auto one = build_forward_dfa({split("ab", "x[0-9]{3}", 0)}, CompileConfig{});
    auto two = build_forward_dfa({split("ab", "x[0-9]{3}", 0), split("cd", "x[0-9]{3}", 1), split("ef", "y+", 2)},
                                 CompileConfig{});
    CHECK(two.backs.size() == 2);
    CHECK(two.splits_of_back[0] == std::vector<std::uint32_t>{0, 1});
    CHECK(two.back_of_split == std::vector<std::int32_t>{0, 0, 1});
    CHECK(two.dfa.size() < 2 * one.dfa.size() + 3);
    CompressedStt c(two.dfa);
    auto data = xavtest::bytes("x123yyy");
    auto t = run_thread(c, data, 0, Direction::Forward, two.entry(0));
    REQUIRE(t.accepts.size() == 1);
    CHECK(t.accepts[0].label == 0);
    auto u = run_thread(c, data, 4, Direction::Forward, two.entry(1));
    CHECK(u.accepts.size() == 3);
}

TEST_CASE("classic DFA grows much faster than the anchored one on dot-star pairs") {
    CompileConfig cfg;
    std::vector<ComponentTree> trees;
    std::vector<LsReSplit> splits;
    const char* tokens[][2] = {{"ab", "cd"}, {"ef", "gh"}, {"ij", "kl"}, {"mn", "op"}};
    for (auto& t : tokens) {
        trees.push_back(parse_regex(std::string(t[0]) + ".*" + t[1]).tree);
        splits.push_back(split(t[0]));
        splits.push_back(split(t[1]));
    }
    Dfa classic = build_classic_dfa(trees, cfg);
    Dfa anchored = build_reverse_dfa(splits, cfg);
    CHECK(classic.size() > 16);
    CHECK(anchored.size() < 20);
}
