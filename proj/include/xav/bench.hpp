#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xav/engine.hpp"

namespace xav {

struct StateCountRow {
    std::size_t rules = 0;
    std::size_t classic_states = 0;  // the cap when capped
    bool classic_capped = false;
    std::size_t anchor_states = 0;   // reverse + forward
    std::size_t reverse_states = 0;
    std::size_t forward_states = 0;
    double ratio = 0;                // classic / anchor; a lower bound when capped
    double classic_ms = 0;
    double anchor_ms = 0;
};

/// Minimized classic unanchored DFA versus the anchor DFAs of the same rules.
StateCountRow measure_statecount(const std::vector<std::string>& rules, const CompileConfig& config = {});

struct CompressionRow {
    std::size_t states = 0;
    std::size_t compressed_bytes = 0;
    std::size_t dense_bytes = 0;
    double ratio = 0;
    bool lookup_equal = false;  // exhaustive state x byte probe against the dense table
};

/// Combined figures for the reverse and forward anchor DFAs of a rule set.
CompressionRow measure_compression(const std::vector<std::string>& rules, const CompileConfig& config = {});
/// Exhaustive compressed-versus-dense lookup comparison.
bool stt_matches_dense(const CompressedStt& stt, const Dfa& dfa);

struct FilterFpRow {
    std::size_t keys = 0;
    std::size_t probes = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    double fp_rate = 0;
    std::size_t memory_bits = 0;
    std::uint32_t attempts = 0;
};

/// Random 8-byte keys in one XFU; probes are distinct random non-members.
FilterFpRow measure_filter_fp(std::size_t keys, std::size_t probes, std::uint64_t seed, unsigned fingerprint_bits = 8);

struct OverheadRow {
    ScanReport report;
    double seconds = 0;
    double mb_per_s = 0;
    std::size_t memory_bytes = 0;
};

OverheadRow measure_overheads(const Database& db, const std::vector<Packet>& packets, unsigned workers = 1);

/// "a:b" (inclusive), "a,b,c" or a single value.
std::vector<std::size_t> parse_range(const std::string& text);

}  // namespace xav
