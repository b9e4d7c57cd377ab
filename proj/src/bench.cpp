#include "xav/bench.hpp"

#include <chrono>
#include <sstream>
#include <unordered_set>

#include "xav/gen.hpp"

namespace xav {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

StateCountRow measure_statecount(const std::vector<std::string>& rules, const CompileConfig& config) {
    StateCountRow row;
    row.rules = rules.size();
    std::vector<ComponentTree> trees;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        trees.push_back(parse_regex(rules[i], static_cast<std::uint32_t>(i)).tree);
    }
    auto t0 = Clock::now();
    try {
        row.classic_states = build_classic_dfa(trees, config).size();
    } catch (const StateExplosion&) {
        row.classic_states = config.dfa_state_cap;
        row.classic_capped = true;
    }
    row.classic_ms = ms_since(t0);

    auto t1 = Clock::now();
    CompileResult r = compile(rules, config);
    row.anchor_ms = ms_since(t1);
    row.reverse_states = r.db.reverse.size();
    row.forward_states = r.db.forward.size();
    row.anchor_states = r.db.anchor_states();
    row.ratio = row.anchor_states == 0 ? 0.0
                                       : static_cast<double>(row.classic_states) / static_cast<double>(row.anchor_states);
    return row;
}

bool stt_matches_dense(const CompressedStt& stt, const Dfa& dfa) {
    if (stt.size() != dfa.size()) {
        return false;
    }
    for (std::uint32_t s = 0; s < dfa.size(); ++s) {
        for (unsigned b = 0; b < 256; ++b) {
            if (stt.next(s, static_cast<std::uint8_t>(b)) != dfa.next(s, static_cast<std::uint8_t>(b))) {
                return false;
            }
        }
        if (stt.accepts(s) != dfa.accepts[s]) {
            return false;
        }
    }
    return true;
}

CompressionRow measure_compression(const std::vector<std::string>& rules, const CompileConfig& config) {
    std::vector<LsReSplit> splits;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        try {
            Decomposition d = decompose(parse_regex(rules[i], static_cast<std::uint32_t>(i)), config);
            for (auto& s : d.splits) {
                s.lsre_id = static_cast<std::uint32_t>(splits.size());
                splits.push_back(std::move(s));
            }
        } catch (const ParseError&) {
        } catch (const UnsupportedRule&) {
        }
    }
    CompressionRow row;
    row.lookup_equal = true;
    for (const Dfa& dfa : {build_reverse_dfa(splits, config), build_forward_dfa(splits, config).dfa}) {
        CompressedStt stt(dfa);
        row.states += stt.size();
        row.compressed_bytes += stt.compressed_bytes();
        row.dense_bytes += stt.dense_bytes();
        row.lookup_equal = row.lookup_equal && stt_matches_dense(stt, dfa);
    }
    row.ratio = row.dense_bytes == 0 ? 0.0
                                     : static_cast<double>(row.compressed_bytes) / static_cast<double>(row.dense_bytes);
    return row;
}

FilterFpRow measure_filter_fp(std::size_t keys, std::size_t probes, std::uint64_t seed, unsigned fingerprint_bits) {
    Rng rng(seed);
    std::unordered_set<std::uint64_t> members;
    std::vector<std::uint64_t> list;
    while (list.size() < keys) {
        std::uint64_t k = rng.next();
        if (members.insert(k).second) {
            list.push_back(k);
        }
    }
    XorFilterUnit xfu = XorFilterUnit::build(list, 8, fingerprint_bits);
    FilterFpRow row;
    row.keys = keys;
    row.memory_bits = xfu.memory_bits();
    row.attempts = xfu.attempts();
    for (std::uint64_t k : list) {
        row.false_negatives += xfu.contains(k) ? 0 : 1;
    }
    while (row.probes < probes) {
        std::uint64_t k = rng.next();
        if (members.count(k) != 0) {
            continue;
        }
        ++row.probes;
        row.false_positives += xfu.contains(k) ? 1 : 0;
    }
    row.fp_rate = row.probes == 0 ? 0.0 : static_cast<double>(row.false_positives) / static_cast<double>(row.probes);
    return row;
}

OverheadRow measure_overheads(const Database& db, const std::vector<Packet>& packets, unsigned workers) {
    OverheadRow row;
    auto t0 = Clock::now();
    row.report = scan_corpus(db, packets, workers);
    row.seconds = ms_since(t0) / 1000.0;
    row.mb_per_s = row.seconds > 0 ? static_cast<double>(row.report.stats.bytes) / 1e6 / row.seconds : 0.0;
    row.memory_bytes = db.memory_bytes();
    return row;
}

std::vector<std::size_t> parse_range(const std::string& text) {
    std::vector<std::size_t> out;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument("bad number in range: " + s);
        }
        return static_cast<std::size_t>(v);
    };
    if (auto colon = text.find(':'); colon != std::string::npos) {
        std::size_t a = num(text.substr(0, colon));
        std::size_t b = num(text.substr(colon + 1));
        if (a > b) {
            throw std::invalid_argument("empty range: " + text);
        }
        for (std::size_t k = a; k <= b; ++k) {
            out.push_back(k);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        out.push_back(num(part));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty range");
    }
    return out;
}

}  // namespace xav
