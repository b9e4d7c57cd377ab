#include "doctest.h"
#include "support.hpp"

#include <random>
#include <set>

#include "xav/xor_filter.hpp"

using namespace xav;

namespace {

LsReSplit split_for(std::string_view pattern, std::uint32_t id) {
    LsReSplit s;
    s.lsre_id = id;
    auto n = parse_regex(pattern).tree.root;
    if (n.kind == NodeKind::Class) {
        s.ldre.classes.push_back(n.cls);
    } else {
        for (const auto& c : n.children) {
            s.ldre.classes.push_back(c.cls);
        }
    }
    s.front = n;
    return s;
}

}  // namespace

TEST_CASE("pack_key puts the first byte highest") {
    auto b = xavtest::bytes("ab");
    CHECK(pack_key(b) == 0x6162u);
    auto c = xavtest::bytes("abcd");
    CHECK(pack_key(c) == 0x61626364u);
}

TEST_CASE("DFU hits at the ends of both windows") {
    auto fb = build_filter({split_for("ab", 1), split_for("cd", 2)}, CompileConfig{});
    auto data = xavtest::bytes("aabcd");
    auto hits = fb.bank.scan(data);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0] == FilterHit{2, FilterUnitKind::DFU});
    CHECK(hits[1] == FilterHit{4, FilterUnitKind::DFU});
    CHECK(fb.bank.scan({}).empty());
    CHECK(fb.key_owners.at("ab") == std::vector<std::uint32_t>{1});
}

TEST_CASE("empty bank answers false everywhere") {
    auto fb = build_filter({}, CompileConfig{});
    CHECK(fb.bank.dfu().population() == 0);
    CHECK(fb.bank.xfu4().key_count() == 0);
    auto w2 = xavtest::bytes("ab");
    auto w4 = xavtest::bytes("abcd");
    auto w8 = xavtest::bytes("abcdefgh");
    CHECK_FALSE(fb.bank.query(w2));
    CHECK_FALSE(fb.bank.query(w4));
    CHECK_FALSE(fb.bank.query(w8));
    auto w3 = xavtest::bytes("abc");
    CHECK_THROWS_AS((void)fb.bank.query(w3), std::invalid_argument);
}

TEST_CASE("every inserted key queries true across units") {
    std::vector<LsReSplit> splits{split_for("ser=", 1), split_for("AUTH", 2), split_for("PARTIAL!", 3),
                                  split_for("BODY", 4), split_for("mic\\x7c", 5), split_for("[ab][cd]", 6)};
    auto fb = build_filter(splits, CompileConfig{});
    CHECK(fb.keys2 == 4);
    CHECK(fb.keys4 == 4);
    CHECK(fb.keys8 == 1);
    for (const auto& [key, owners] : fb.key_owners) {
        auto b = std::span(reinterpret_cast<const std::uint8_t*>(key.data()), key.size());
        CHECK(fb.bank.query(b));
    }
    auto absent = xavtest::bytes("zz");
    CHECK_FALSE(fb.bank.query(absent));
}

TEST_CASE("xor filter has no false negatives and an FP rate near 2^-k") {
    std::mt19937_64 rng(7);
    std::set<std::uint64_t> keys;
    while (keys.size() < 10000) {
        keys.insert(rng());
    }
    auto f = XorFilterUnit::build({keys.begin(), keys.end()}, 8, 8);
    for (std::uint64_t k : keys) {
        REQUIRE(f.contains(k));
    }
    std::size_t fp = 0;
    std::size_t trials = 0;
    while (trials < 200000) {
        std::uint64_t q = rng();
        if (keys.count(q)) {
            continue;
        }
        ++trials;
        fp += f.contains(q) ? 1 : 0;
    }
    double rate = static_cast<double>(fp) / static_cast<double>(trials);
    CHECK(rate > 0.5 / 256);
    CHECK(rate < 2.0 / 256);
}

TEST_CASE("duplicate keys and tiny sets build") {
    auto f = XorFilterUnit::build({5, 5, 5}, 4, 8);
    CHECK(f.key_count() == 1);
    CHECK(f.contains(5));
    auto g = XorFilterUnit::build({}, 4, 8);
    CHECK_FALSE(g.contains(5));
}

TEST_CASE("filter bank serialization round-trips") {
    std::vector<LsReSplit> splits{split_for("ab", 1), split_for("AUTH", 2), split_for("PARTIAL!", 3)};
    auto fb = build_filter(splits, CompileConfig{});
    auto blob = fb.bank.serialize();
    auto back = FilterBank::deserialize(blob);
    CHECK(back.serialize() == blob);
    std::mt19937_64 rng(3);
    std::vector<std::uint8_t> data(5000);
    for (auto& b : data) {
        b = static_cast<std::uint8_t>(rng());
    }
    auto extra = xavtest::bytes("xxPARTIAL!xxAUTHab");
    data.insert(data.end(), extra.begin(), extra.end());
    CHECK(back.scan(data) == fb.bank.scan(data));
    blob[0] ^= 1;
    CHECK_THROWS_AS(FilterBank::deserialize(blob), FormatError);
    auto truncated = fb.bank.serialize();
    truncated.pop_back();
    CHECK_THROWS_AS(FilterBank::deserialize(truncated), FormatError);
}

TEST_CASE("scan ordering within one offset") {
    auto fb = build_filter({split_for("cd", 1), split_for("abcd", 2), split_for("abcdabcd", 3)}, CompileConfig{});
    auto data = xavtest::bytes("abcdabcd");
    auto hits = fb.bank.scan(data);
    std::vector<FilterHit> at7;
    for (const auto& h : hits) {
        if (h.end_offset == 7) {
            at7.push_back(h);
        }
    }
    REQUIRE(at7.size() == 3);
    CHECK(at7[0].unit == FilterUnitKind::DFU);
    CHECK(at7[1].unit == FilterUnitKind::XFU4);
    CHECK(at7[2].unit == FilterUnitKind::XFU8);
}
