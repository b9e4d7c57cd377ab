#include "doctest.h"
#include "support.hpp"

#include "xav/gen.hpp"
#include "xav/oracle.hpp"

using namespace xav;

namespace {

std::vector<std::size_t> oracle_ends(std::string_view pattern, std::string_view data) {
    auto b = xavtest::bytes(data);
    return oracle_match(parse_regex(pattern), b).ends;
}

// Ends (inclusive) of non-empty substrings accepted by the tree, anchors honored.
std::vector<std::size_t> brute_ends(const ComponentTree& t, std::string_view s) {
    std::set<std::size_t> ends;
    const std::size_t last_start = t.leading_anchor ? 0 : s.size();
    for (std::size_t i = 0; i <= last_start && i <= s.size(); ++i) {
        for (std::size_t e : xavtest::ends_from(t.root, s, {i})) {
            if (e > i && (!t.trailing_anchor || e == s.size())) {
                ends.insert(e - 1);
            }
        }
    }
    return {ends.begin(), ends.end()};
}

std::string small_piece(Rng& rng, int depth) {
    static const char* atoms[] = {"a", "b", "c", "d", "[ab]", "[^a]", ".", "[cd]"};
    if (depth == 0 || rng.chance(2, 5)) {
        return atoms[rng.uniform(8)];
    }
    switch (rng.uniform(4)) {
        case 0: return small_piece(rng, depth - 1) + small_piece(rng, depth - 1);
        case 1: return "(" + small_piece(rng, depth - 1) + "|" + small_piece(rng, depth - 1) + ")";
        case 2: {
            static const char* reps[] = {"*", "+", "?", "{2}", "{1,3}", "{0,2}", "{2,}"};
            return "(" + small_piece(rng, depth - 1) + ")" + reps[rng.uniform(7)];
        }
        default: return small_piece(rng, depth - 1) + small_piece(rng, depth - 1) + small_piece(rng, depth - 1);
    }
}

}  // namespace

TEST_CASE("oracle worked examples") {
    CHECK(oracle_ends("abc", "ababc") == std::vector<std::size_t>{4});
    CHECK(oracle_ends("a", "").empty());
    CHECK(oracle_ends("ab.*cd", "aabcd") == std::vector<std::size_t>{4});
    CHECK(oracle_ends("ab.*cd", "cdab").empty());
    CHECK(oracle_ends("ab.{2,3}cd", "abXcd").empty());
    CHECK(oracle_ends("ab.{2,3}cd", "abXXcd") == std::vector<std::size_t>{5});
    CHECK(oracle_ends("^ab", "abab") == std::vector<std::size_t>{1});
    CHECK(oracle_ends("ab$", "abab") == std::vector<std::size_t>{3});
    CHECK(oracle_ends("a+", "baab") == std::vector<std::size_t>{1, 2});
}

TEST_CASE("oracle empty matches") {
    auto empty = xavtest::bytes("");
    CHECK(oracle_match(parse_regex("a*"), empty).empty_match);
    CHECK(oracle_match(parse_regex("a*"), empty).matched());
    CHECK_FALSE(oracle_match(parse_regex("a"), empty).matched());
    auto b = xavtest::bytes("b");
    CHECK(oracle_match(parse_regex("^a*$"), empty).empty_match);
    CHECK_FALSE(oracle_match(parse_regex("^a*$"), b).empty_match);
}

TEST_CASE("oracle agrees with exhaustive substring checks") {
    Rng rng(20240601);
    // all strings up to length 5, plus random ones up to length 8
    auto inputs = xavtest::all_strings("abcd", 5);
    for (int i = 0; i < 300; ++i) {
        std::string s;
        auto n = rng.range(6, 8);
        for (std::size_t j = 0; j < n; ++j) s.push_back("abcd"[rng.uniform(4)]);
        inputs.push_back(s);
    }
    int checked = 0;
    for (int r = 0; r < 200; ++r) {
        std::string p = small_piece(rng, 3);
        if (rng.chance(1, 6)) p = "^" + p;
        if (rng.chance(1, 6)) p += "$";
        RegexRule rule = parse_regex(p);
        Oracle o(rule);
        for (const auto& s : inputs) {
            auto b = xavtest::bytes(s);
            auto got = o.match(b).ends;
            auto want = brute_ends(rule.tree, s);
            if (got != want) {
                FAIL_CHECK("pattern " << p << " input " << s);
            }
            ++checked;
        }
    }
    CHECK(checked == 200 * static_cast<int>(inputs.size()));
}
