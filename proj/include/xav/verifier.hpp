#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xav/automata.hpp"
#include "xav/bytes.hpp"
#include "xav/config.hpp"
#include "xav/decompose.hpp"

namespace xav {

enum class LusReKind : std::uint8_t { Empty, DotMN, CCMN, Complex };

/// Compiled check for one lusRE.
struct LusReCheck {
    LusReKind kind = LusReKind::Empty;
    CharClass cls;
    std::uint32_t min = 0;
    std::uint32_t max = 0;
    CompressedStt exact;     // Complex: anchored DFA of the fragment
    CompressedStt reversed;  // Complex R1 without a leading anchor: DFA of the reversed fragment

    [[nodiscard]] bool escalates() const { return kind == LusReKind::CCMN || kind == LusReKind::Complex; }
    friend bool operator==(const LusReCheck&, const LusReCheck&) = default;
};

/// with_reverse also compiles the reversed DFA for Complex fragments.
/// Throws UnsupportedRule if a lusDFA exceeds the state cap.
LusReCheck classify_lusre(const Fragment& fragment, const CompileConfig& config, bool with_reverse = false);

/// Per-rule verification table: gaps[k - 1] is R_k, k in [1, n + 1].
struct RuleTable {
    std::uint32_t rule_id = 0;
    bool leading_anchor = false;
    bool trailing_anchor = false;
    std::vector<LusReCheck> gaps;

    [[nodiscard]] std::size_t lsre_count() const { return gaps.empty() ? 0 : gaps.size() - 1; }
    friend bool operator==(const RuleTable&, const RuleTable&) = default;
};

RuleTable build_rule_table(const DecomposedRule& rule, const CompileConfig& config);

void serialize_rule_table(const RuleTable& table, ByteWriter& out);
RuleTable deserialize_rule_table(ByteReader& in);

struct CheckCost {
    std::size_t bytes = 0;     // gap bytes examined
    bool escalated = false;    // a CCMN or Complex check ran
};

/// Exact check of data[begin, end) against the fragment.
bool check_gap(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t begin, std::size_t end,
               CheckCost* cost = nullptr);

/// Is some suffix of data[0, end) in the fragment's language?
bool check_unanchored_prefix(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t end,
                             CheckCost* cost = nullptr);

/// Smallest e >= begin - 1 such that data[begin, e] is accepted; returns false if none.
bool find_suffix_end(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t begin,
                     std::size_t& end_out, CheckCost* cost = nullptr);

struct MatchEvent {
    std::uint32_t table = 0;  // index into the rule tables
    std::uint32_t k = 0;      // 1-based lsRE index
    std::size_t pos_s = 0;
    std::size_t pos_e = 0;

    friend auto operator<=>(const MatchEvent&, const MatchEvent&) = default;
};

struct RuleMatch {
    std::uint32_t rule = 0;
    std::size_t end = 0;

    friend auto operator<=>(const RuleMatch&, const RuleMatch&) = default;
};

struct VerifyStats {
    std::uint64_t events = 0;
    std::uint64_t gap_checks = 0;
    std::uint64_t verify_bytes = 0;
    std::uint64_t saturated = 0;  // records dropped at the cap
    bool escalated = false;
};

/// Per-packet record keeping. Events must arrive in non-decreasing pos_e.
class Verifier {
public:
    Verifier(const std::vector<RuleTable>& tables, std::uint32_t record_cap);

    void reset(std::span<const std::uint8_t> packet);
    void on_event(const MatchEvent& ev);
    /// Sorted by (rule, end), deduplicated.
    [[nodiscard]] std::vector<RuleMatch> take_matches();
    [[nodiscard]] const VerifyStats& stats() const { return m_stats; }

private:
    std::vector<std::size_t>& records(std::uint32_t table, std::uint32_t k);
    void emit(std::uint32_t rule, std::size_t end);

    const std::vector<RuleTable>& m_tables;
    std::uint32_t m_cap;
    std::span<const std::uint8_t> m_packet;
    std::vector<std::vector<std::vector<std::size_t>>> m_records;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> m_touched;
    std::vector<RuleMatch> m_matches;
    VerifyStats m_stats;
};

}  // namespace xav
