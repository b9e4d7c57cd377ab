#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xav/config.hpp"
#include "xav/engine.hpp"
#include "xav/regex.hpp"

namespace xav {

/// Seed-deterministic generator; uniform() avoids std distributions, which differ across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}
    std::uint64_t next() { return m_engine(); }
    /// Uniform in [0, n), n > 0.
    std::uint64_t uniform(std::uint64_t n);
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + uniform(hi - lo + 1); }
    bool chance(std::uint64_t num, std::uint64_t den) { return uniform(den) < num; }

private:
    std::mt19937_64 m_engine;
};

/// Two-letter lowercase token number i (i < 676).
std::string dotstar_token(std::size_t i);

/// G_k: rule i is token(2i) ".*" token(2i+1).
std::vector<std::string> dotstar_family(std::size_t k);

/// The four-rule set of the compilation walkthrough.
std::vector<std::string> figure3_rules();

/// Packets of uniform random bytes totalling `bytes`.
std::vector<Packet> random_traffic(std::uint64_t bytes, std::uint64_t seed, std::size_t packet_size = 1500);

/// Printable, word-like traffic totalling `bytes`.
std::vector<Packet> text_traffic(std::uint64_t bytes, std::uint64_t seed, std::size_t packet_size = 1500);

/// Random string accepted by `node`; unbounded repeats draw at most `spread` extra iterations.
std::string sample_match(const Node& node, Rng& rng, std::uint32_t spread = 4);

/// Random rule over the supported syntax: literals, dot-star, CC-MN, alternations, counted repeats, anchors.
std::string random_rule(Rng& rng);

struct DiffCase {
    std::vector<std::string> rules;
    std::vector<Packet> packets;
};

/// One batch: rules plus packets mixing embedded matches, near misses and random filler.
DiffCase random_diff_case(Rng& rng, std::size_t rules, std::size_t packets);

struct Disagreement {
    std::size_t packet = 0;
    std::uint32_t rule = 0;
    bool engine = false;
    bool oracle = false;
};

struct DiffSummary {
    std::size_t rules = 0;
    std::size_t unsupported = 0;
    std::size_t pairs = 0;          // supported rule x packet
    std::size_t oracle_matches = 0; // pairs where the oracle reports a match
    std::size_t disagreements = 0;
    std::uint64_t saturated = 0;
    std::vector<Disagreement> examples;  // the first few

    DiffSummary& operator+=(const DiffSummary& o);
};

/// Compares rule-match presence of the engine against the oracle for every supported rule and packet.
/// Throws CompileError when no rule is supported.
DiffSummary differential(const std::vector<std::string>& rules, const std::vector<Packet>& packets,
                         const CompileConfig& config = {});

}  // namespace xav
