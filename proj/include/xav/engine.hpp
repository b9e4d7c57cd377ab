#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xav/automata.hpp"
#include "xav/config.hpp"
#include "xav/decompose.hpp"
#include "xav/verifier.hpp"
#include "xav/xor_filter.hpp"

namespace xav {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RuleInfo {
    std::uint32_t id = 0;
    std::string pattern;
    bool supported = false;
    std::string reason;       // why the rule was skipped
    std::uint64_t digest = 0; // FNV-1a of the pattern

    friend bool operator==(const RuleInfo&, const RuleInfo&) = default;
};

struct SplitMeta {
    std::uint32_t lsre_id = 0;
    std::uint32_t table = 0;  // index into Database::tables
    std::uint32_t k = 0;
    std::int32_t back = -1;   // forward-DFA back index, -1 without a back part
    std::string ldre;         // pattern of the filtered window

    friend bool operator==(const SplitMeta&, const SplitMeta&) = default;
};

struct StageTimings {
    double decompose_ms = 0;
    double filter_ms = 0;
    double anchor_dfa_ms = 0;
    double verifier_ms = 0;
};

struct CompileReport {
    std::size_t rules = 0;
    std::size_t supported = 0;
    std::size_t splits = 0;
    std::size_t filter_keys = 0;
    std::size_t reverse_states = 0;
    std::size_t forward_states = 0;
    std::size_t lusdfa_states = 0;
    StageTimings timings;
    std::vector<std::string> notes;
};

/// Immutable compiled rule set.
struct Database {
    CompileConfig config;
    std::vector<RuleInfo> rules;
    std::vector<RuleTable> tables;
    std::vector<SplitMeta> splits;  // position is the reverse-DFA label
    std::vector<std::vector<std::uint32_t>> splits_of_back;
    FilterBank filter;
    CompressedStt reverse;
    CompressedStt forward;

    [[nodiscard]] std::size_t anchor_states() const { return reverse.size() + forward.size(); }
    [[nodiscard]] std::size_t memory_bytes() const;

    [[nodiscard]] std::vector<std::uint8_t> serialize() const;
    static Database deserialize(std::span<const std::uint8_t> blob);
};

struct CompileResult {
    Database db;
    CompileReport report;
};

std::uint64_t fnv1a64(std::string_view s);

/// Rule ids are list positions. Throws CompileError when no rule survives.
CompileResult compile(const std::vector<std::string>& patterns, const CompileConfig& config = {});

struct ScanStats {
    std::uint64_t packets = 0;
    std::uint64_t bytes = 0;
    std::uint64_t filter_hits = 0;       // distinct hit offsets
    std::uint64_t adfa_transitions = 0;  // reverse + forward thread transitions
    std::uint64_t reverse_threads = 0;
    std::uint64_t forward_threads = 0;
    std::uint64_t reverse_accepts = 0;
    std::uint64_t events = 0;
    std::uint64_t escalated_packets = 0;
    std::uint64_t verify_bytes = 0;
    std::uint64_t saturated_records = 0;

    ScanStats& operator+=(const ScanStats& o);
    friend bool operator==(const ScanStats&, const ScanStats&) = default;
};

/// Per-worker reusable buffers.
class ScanContext {
public:
    explicit ScanContext(const Database& db);
    std::vector<RuleMatch> scan(std::span<const std::uint8_t> packet, ScanStats& stats);

private:
    const Database& m_db;
    Verifier m_verifier;
    std::vector<std::size_t> m_hits;
    std::vector<std::pair<std::uint32_t, std::size_t>> m_starts;  // (split, pos_s)
    std::vector<std::size_t> m_ends;
    std::vector<MatchEvent> m_events;
};

std::vector<RuleMatch> scan_packet(const Database& db, std::span<const std::uint8_t> packet, ScanStats& stats);

struct PacketResult {
    std::vector<RuleMatch> matches;
};

struct ScanReport {
    std::vector<PacketResult> packets;
    ScanStats stats;
    bool partial = false;  // the corpus could not be read completely
    std::string error;
};

using Packet = std::vector<std::uint8_t>;

/// Packets are independent; output is ordered by packet index irrespective of workers.
ScanReport scan_corpus(const Database& db, const std::vector<Packet>& packets, unsigned workers = 1);

enum class CorpusFormat { Auto, Raw, Directory, Container };

struct Corpus {
    std::vector<Packet> packets;
    bool partial = false;
    std::string error;
};

CorpusFormat parse_corpus_format(std::string_view name);
/// Throws std::runtime_error if the path cannot be opened at all.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::Auto);
void write_container(const std::filesystem::path& path, const std::vector<Packet>& packets);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

inline constexpr int kReportSchemaVersion = 1;

/// Deterministic JSON text (sorted keys, matches ordered by packet, rule, end).
std::string report_json(const ScanReport& report);
std::string report_csv_header();
std::string report_csv_row(const std::string& label, const ScanReport& report);

}  // namespace xav
