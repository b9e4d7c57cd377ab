#pragma once

#include <cstddef>
#include <cstdint>

namespace xav {

/// Compile-time thresholds. Defaults follow the reference XAV implementation.
struct CompileConfig {
    double probability_threshold = 1e-4;    // P_T: an ldRE is filter-friendly below this
    std::uint32_t max_ldre_length = 8;      // L_T
    std::uint32_t long_population = 128;    // class population strictly above this is "big"
    std::uint32_t long_count = 50;          // counting constraint strictly above this is "large"
    std::uint64_t max_expansion = 1024;     // E_max: concrete keys per ldRE
    std::uint32_t fingerprint_bits = 8;     // xor filter fingerprint width k
    std::size_t nfa_state_cap = 1'000'000;
    std::size_t dfa_state_cap = 1'000'000;
    std::uint32_t record_cap = 64;          // verification records per (rule, fragment, packet)
    std::size_t max_alternatives = 32;      // distributed alternatives per lsRE
};

}  // namespace xav
