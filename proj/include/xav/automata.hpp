#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xav/bytes.hpp"
#include "xav/config.hpp"
#include "xav/decompose.hpp"
#include "xav/regex.hpp"

namespace xav {

/// Subset construction or unrolling hit its configured state cap.
class StateExplosion : public std::runtime_error {
public:
    StateExplosion(const std::string& what, std::size_t partial_states)
        : std::runtime_error(what), m_partial(partial_states) {}
    [[nodiscard]] std::size_t partial_states() const { return m_partial; }

private:
    std::size_t m_partial;
};

struct Nfa {
    static constexpr std::uint32_t kNoClass = UINT32_MAX;

    struct State {
        std::uint32_t cls = kNoClass;  // index into classes, or kNoClass for pure epsilon states
        std::uint32_t target = 0;
        std::vector<std::uint32_t> eps;
        std::vector<std::uint32_t> labels;  // sorted; non-empty marks an accept state
    };

    std::vector<State> states;
    std::vector<CharClass> classes;
    /// Either one common start, or one entry per pattern.
    std::vector<std::uint32_t> starts;

    [[nodiscard]] std::size_t size() const { return states.size(); }
    [[nodiscard]] std::size_t transition_count() const;
};

struct NfaPattern {
    Node tree;
    std::uint32_t label = 0;
};

/// Thompson construction. With separate_entries each pattern keeps its own start.
Nfa thompson(const std::vector<NfaPattern>& patterns, std::size_t state_cap = 1'000'000,
             bool separate_entries = false);
/// Labels are the tree indices. Anchors are ignored; the trees are matched as written.
Nfa thompson(const std::vector<ComponentTree>& trees, std::size_t state_cap = 1'000'000);

/// Total DFA. State 0 is dead; start states follow in entry order, then BFS order.
/// Bytes are grouped into equivalence classes; next() is still defined for all 256 bytes.
struct Dfa {
    static constexpr std::uint32_t kDead = 0;

    std::array<std::uint8_t, 256> byte_class{};
    std::uint32_t num_classes = 1;
    std::vector<std::uint32_t> table;  // state * num_classes + class
    std::vector<std::vector<std::uint32_t>> accepts;
    std::vector<std::uint32_t> starts{kDead};

    [[nodiscard]] std::size_t size() const { return accepts.size(); }
    [[nodiscard]] std::uint32_t start() const { return starts.empty() ? kDead : starts[0]; }
    [[nodiscard]] std::uint32_t next(std::uint32_t s, std::uint8_t b) const {
        return table[static_cast<std::size_t>(s) * num_classes + byte_class[b]];
    }
    [[nodiscard]] bool accepting(std::uint32_t s) const { return !accepts[s].empty(); }
    /// Dead-only DFA.
    static Dfa empty();
    /// Runs from start over the whole input; returns the final state's labels.
    [[nodiscard]] const std::vector<std::uint32_t>& run(std::span<const std::uint8_t> data,
                                                        std::uint32_t entry = 0) const;
};

/// starts[i] of the NFA becomes starts[i] of the DFA. Throws StateExplosion.
Dfa determinize(const Nfa& nfa, std::size_t state_cap = 1'000'000);

/// Hopcroft refinement; accept-label sets seed the initial partition.
Dfa minimize(const Dfa& dfa);

/// thompson + determinize + minimize for anchored patterns.
Dfa compile_dfa(const std::vector<NfaPattern>& patterns, const CompileConfig& config,
                bool separate_entries = false);

/// Per-state 256-bit change bitmap plus successor runs.
class CompressedStt {
public:
    CompressedStt() = default;
    explicit CompressedStt(const Dfa& dfa);

    [[nodiscard]] std::uint32_t next(std::uint32_t s, std::uint8_t b) const {
        const auto& words = m_bitmaps[s];
        const unsigned w = b >> 6;
        const unsigned r = b & 63u;
        std::uint64_t low = r == 63 ? words[w] : words[w] & ((std::uint64_t{2} << r) - 1);
        unsigned rank = static_cast<unsigned>(__builtin_popcountll(low));
        for (unsigned i = 0; i < w; ++i) {
            rank += static_cast<unsigned>(__builtin_popcountll(words[i]));
        }
        return rank == 0 ? 0u : m_succ[m_offsets[s] + rank - 1];
    }

    [[nodiscard]] std::size_t size() const { return m_bitmaps.size(); }
    [[nodiscard]] std::uint32_t start() const { return m_starts.empty() ? 0u : m_starts[0]; }
    [[nodiscard]] const std::vector<std::uint32_t>& starts() const { return m_starts; }
    [[nodiscard]] const std::vector<std::uint32_t>& accepts(std::uint32_t s) const { return m_accepts[s]; }
    [[nodiscard]] bool accepting(std::uint32_t s) const { return !m_accepts[s].empty(); }

    [[nodiscard]] std::size_t compressed_bytes() const;
    [[nodiscard]] std::size_t dense_bytes() const { return size() * 256 * sizeof(std::uint32_t); }
    /// compressed_bytes / dense_bytes.
    [[nodiscard]] double compression_ratio() const;

    [[nodiscard]] std::vector<std::uint8_t> serialize() const;
    static CompressedStt deserialize(std::span<const std::uint8_t> blob);

    friend bool operator==(const CompressedStt&, const CompressedStt&) = default;

private:
    std::vector<std::array<std::uint64_t, 4>> m_bitmaps;
    std::vector<std::uint32_t> m_offsets;
    std::vector<std::uint32_t> m_succ;
    std::vector<std::vector<std::uint32_t>> m_accepts;
    std::vector<std::uint32_t> m_starts;
};

enum class Direction : std::uint8_t { Forward, Reverse };

struct ThreadAccept {
    std::uint32_t label = 0;
    std::size_t depth = 0;
    std::size_t begin = 0;  // half-open span [begin, end) consumed so far
    std::size_t end = 0;
    friend bool operator==(const ThreadAccept&, const ThreadAccept&) = default;
};

struct ThreadResult {
    std::vector<ThreadAccept> accepts;
    std::size_t transitions = 0;
};

/// Invokes on_accept(labels, depth) for every accepting state visited, depth 0 included.
/// Forward threads consume data[offset], data[offset+1], ...; reverse threads go downwards.
/// Returns the number of transitions performed.
template <typename OnAccept>
std::size_t run_thread_each(const CompressedStt& stt, std::span<const std::uint8_t> data, std::size_t offset,
                            Direction dir, std::uint32_t entry, OnAccept&& on_accept) {
    std::uint32_t s = entry;
    if (s == 0) {
        return 0;
    }
    if (stt.accepting(s)) {
        on_accept(stt.accepts(s), std::size_t{0});
    }
    std::size_t depth = 0;
    if (dir == Direction::Forward) {
        for (std::size_t i = offset; i < data.size(); ++i) {
            s = stt.next(s, data[i]);
            ++depth;
            if (s == 0) {
                break;
            }
            if (stt.accepting(s)) {
                on_accept(stt.accepts(s), depth);
            }
        }
    } else {
        if (offset >= data.size()) {
            return 0;
        }
        for (std::size_t i = offset + 1; i-- > 0;) {
            s = stt.next(s, data[i]);
            ++depth;
            if (s == 0) {
                break;
            }
            if (stt.accepting(s)) {
                on_accept(stt.accepts(s), depth);
            }
        }
    }
    return depth;
}

inline constexpr std::uint32_t kStartState = UINT32_MAX;

/// Materialized form of run_thread_each. kStartState means stt.start().
ThreadResult run_thread(const CompressedStt& stt, std::span<const std::uint8_t> data, std::size_t offset,
                        Direction dir, std::uint32_t entry = kStartState);

/// Anchored DFA over the reversed front of every split; labels are split positions.
Dfa build_reverse_dfa(const std::vector<LsReSplit>& splits, const CompileConfig& config);

struct ForwardDfa {
    Dfa dfa;
    std::vector<Node> backs;                              // distinct back parts
    std::vector<std::int32_t> back_of_split;              // split position -> back index or -1
    std::vector<std::vector<std::uint32_t>> splits_of_back;
    [[nodiscard]] std::uint32_t entry(std::size_t back) const { return dfa.starts[back]; }
};

/// Merged anchored DFA over the distinct back parts; labels are back indices.
ForwardDfa build_forward_dfa(const std::vector<LsReSplit>& splits, const CompileConfig& config);

/// Unanchored baseline: every pattern prefixed with a dot-star unless it has a leading anchor.
Dfa build_classic_dfa(const std::vector<ComponentTree>& trees, const CompileConfig& config, bool minimized = true);

}  // namespace xav
