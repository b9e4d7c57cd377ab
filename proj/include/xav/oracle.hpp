#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xav/regex.hpp"

namespace xav {

struct OracleResult {
    std::uint32_t rule_id = 0;
    std::vector<std::size_t> ends;  // offsets of the last byte of non-empty matches, increasing
    bool empty_match = false;       // the pattern matches the empty string somewhere

    [[nodiscard]] bool matched() const { return !ends.empty() || empty_match; }
};

/// Reference NFA simulation over the undecomposed rule. Slow by design.
class Oracle {
public:
    explicit Oracle(const RegexRule& rule);

    [[nodiscard]] OracleResult match(std::span<const std::uint8_t> data) const;
    [[nodiscard]] std::size_t state_count() const { return m_states.size(); }

private:
    struct State {
        CharClass cls;
        bool consumes = false;
        std::uint32_t next = 0;
        std::vector<std::uint32_t> eps;
    };

    std::uint32_t add();
    std::pair<std::uint32_t, std::uint32_t> build(const Node& n);
    void close(std::vector<std::uint32_t>& set, std::vector<char>& mark) const;

    std::uint32_t m_rule_id = 0;
    bool m_leading = false;
    bool m_trailing = false;
    std::vector<State> m_states;
    std::uint32_t m_start = 0;
    std::uint32_t m_accept = 0;
};

OracleResult oracle_match(const RegexRule& rule, std::span<const std::uint8_t> data);

}  // namespace xav
