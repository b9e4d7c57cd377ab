#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "xav/config.hpp"
#include "xav/regex.hpp"

namespace xav {

/// Rule that compiles but cannot be handled by the filter/anchor-DFA pipeline.
class UnsupportedRule : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FragmentKind : std::uint8_t { LsRE, LusRE };

struct Fragment {
    FragmentKind kind = FragmentKind::LusRE;
    Node tree;                // empty Concat for an elided R1 / Rn+1
    std::uint32_t index = 0;  // position in the rule's fragment sequence
    bool unfriendly = false;  // lsRE without a usable ldRE
    bool merged = false;      // lusRE that absorbed an unfriendly lsRE
};

/// R1 S1 R2 ... Sn Rn+1. The outer lusREs are always present and may be empty.
struct DecomposedRule {
    std::uint32_t rule_id = 0;
    std::vector<Fragment> fragments;
    bool leading_anchor = false;
    bool trailing_anchor = false;

    [[nodiscard]] std::size_t lsre_count() const { return fragments.size() / 2; }
    /// k in [1, n].
    [[nodiscard]] const Fragment& lsre(std::size_t k) const { return fragments[2 * k - 1]; }
    /// k in [1, n + 1]; lusre(k) precedes lsre(k).
    [[nodiscard]] const Fragment& lusre(std::size_t k) const { return fragments[2 * (k - 1)]; }
};

/// Fixed-length run of character classes.
struct LdRE {
    std::vector<CharClass> classes;

    [[nodiscard]] std::size_t length() const { return classes.size(); }
    /// Probability that a random window of the same length matches.
    [[nodiscard]] double probability() const;
    /// Number of concrete strings; saturates at UINT64_MAX.
    [[nodiscard]] std::uint64_t expansion() const;
    [[nodiscard]] std::string to_pattern() const;
    /// Every concrete string, in lexicographic byte order. Keep expansion() small.
    [[nodiscard]] std::vector<std::string> expand() const;
};

struct LsReSplit {
    std::uint32_t lsre_id = 0;   // assigned by the compiler; unique within a database
    std::uint32_t rule_id = 0;
    std::uint32_t fragment = 0;  // 1-based lsRE index k within the rule
    LdRE natural;                // best window before length trimming
    LdRE ldre;                   // length in {2, 4, 8}
    Node front;                  // rule head through the last ldRE class
    Node back;                   // remainder; empty Concat when absent

    [[nodiscard]] bool has_back() const { return !back.is_empty(); }
};

struct LdreExtraction {
    bool friendly = false;
    std::vector<LsReSplit> splits;  // one per distributed alternative
    double best_probability = 1.0;
    std::string reason;
};

bool is_long_component(const Node& node, const CompileConfig& config);
bool contains_long_component(const Node& node, const CompileConfig& config);

/// Cuts the rule at every top-level long component. Throws UnsupportedRule.
DecomposedRule split_rule(const RegexRule& rule, const CompileConfig& config);

/// Picks the most selective window for the prefilter and splits the fragment around it.
LdreExtraction extract_ldre(const Fragment& lsre, const CompileConfig& config);

/// Folds every unfriendly lsRE, together with its two neighbouring lusREs, into one lusRE.
/// Throws UnsupportedRule when no friendly lsRE would remain.
DecomposedRule merge_unfriendly(const DecomposedRule& rule);

struct Decomposition {
    DecomposedRule rule;
    std::vector<LsReSplit> splits;
    std::vector<std::string> notes;
};

/// split_rule + extract_ldre + merge_unfriendly with fragment indices fixed up.
Decomposition decompose(const RegexRule& rule, const CompileConfig& config);

/// Concatenation of all fragment trees, for equivalence checks.
Node recompose(const DecomposedRule& rule);

}  // namespace xav
