#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xav/bytes.hpp"
#include "xav/config.hpp"
#include "xav/decompose.hpp"

namespace xav {

class FilterBuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FilterUnitKind : std::uint8_t { DFU = 0, XFU4 = 1, XFU8 = 2 };

struct FilterHit {
    std::size_t end_offset = 0;  // 0-based offset of the window's last byte
    FilterUnitKind unit = FilterUnitKind::DFU;

    friend bool operator==(const FilterHit&, const FilterHit&) = default;
};

/// Packs a window into a key, first byte most significant.
std::uint64_t pack_key(std::span<const std::uint8_t> window);

/// Exact membership for 2-byte windows.
class DirectFilterUnit {
public:
    static constexpr std::size_t kWords = 65536 / 64;

    void insert(std::uint16_t key) { m_words[key >> 6] |= std::uint64_t{1} << (key & 63); }
    [[nodiscard]] bool contains(std::uint16_t key) const { return (m_words[key >> 6] >> (key & 63)) & 1u; }
    [[nodiscard]] std::size_t population() const;
    [[nodiscard]] const std::vector<std::uint64_t>& words() const { return m_words; }

private:
    std::vector<std::uint64_t> m_words = std::vector<std::uint64_t>(kWords, 0);
};

/// Three-way xor filter over 4- or 8-byte keys (peeling construction).
class XorFilterUnit {
public:
    static constexpr int kMaxAttempts = 100;

    XorFilterUnit() = default;

    /// Duplicates are removed. Throws FilterBuildError if peeling keeps failing.
    static XorFilterUnit build(std::vector<std::uint64_t> keys, std::uint32_t key_length,
                               std::uint32_t fingerprint_bits, std::uint64_t base_seed = 0x58415646u);

    [[nodiscard]] bool contains(std::uint64_t key) const {
        if (m_key_count == 0) {
            return false;
        }
        std::uint64_t h = hash(key);
        std::uint16_t f = fingerprint(h);
        auto [a, b, c] = slots(h);
        return f == (m_fingerprints[a] ^ m_fingerprints[b] ^ m_fingerprints[c]);
    }

    [[nodiscard]] std::uint32_t key_length() const { return m_key_length; }
    [[nodiscard]] std::uint32_t fingerprint_bits() const { return m_bits; }
    [[nodiscard]] std::size_t key_count() const { return m_key_count; }
    [[nodiscard]] std::uint32_t block_length() const { return m_block_length; }
    [[nodiscard]] std::uint64_t seed() const { return m_seed; }
    [[nodiscard]] int attempts() const { return m_attempts; }
    /// Slot storage at fingerprint_bits per slot.
    [[nodiscard]] std::size_t memory_bits() const { return m_fingerprints.size() * m_bits; }

    void serialize(ByteWriter& out) const;
    static XorFilterUnit deserialize(ByteReader& in);

private:
    struct Slots {
        std::uint32_t a, b, c;
    };

    [[nodiscard]] std::uint64_t hash(std::uint64_t key) const;
    [[nodiscard]] std::uint16_t fingerprint(std::uint64_t h) const {
        return static_cast<std::uint16_t>((h ^ (h >> 32)) & m_mask);
    }
    [[nodiscard]] Slots slots(std::uint64_t h) const;

    std::uint32_t m_key_length = 8;
    std::uint32_t m_bits = 8;
    std::uint16_t m_mask = 0xff;
    std::uint64_t m_seed = 0;
    std::uint32_t m_block_length = 0;
    std::size_t m_key_count = 0;
    int m_attempts = 0;
    std::vector<std::uint16_t> m_fingerprints;
};

/// One DFU and two XFUs queried at every input offset.
class FilterBank {
public:
    FilterBank() = default;
    FilterBank(DirectFilterUnit dfu, XorFilterUnit xfu4, XorFilterUnit xfu8)
        : m_dfu(std::move(dfu)), m_xfu4(std::move(xfu4)), m_xfu8(std::move(xfu8)) {}

    /// window.size() must be 2, 4, or 8; throws std::invalid_argument otherwise.
    [[nodiscard]] bool query(std::span<const std::uint8_t> window) const;

    /// Hits in increasing end offset; DFU < XFU4 < XFU8 within an offset.
    [[nodiscard]] std::vector<FilterHit> scan(std::span<const std::uint8_t> data) const;

    /// Invokes on_hit(end_offset, unit) with the same ordering as scan().
    template <typename OnHit>
    void scan_each(std::span<const std::uint8_t> data, OnHit&& on_hit) const {
        std::uint64_t reg = 0;
        const bool has4 = m_xfu4.key_count() > 0;
        const bool has8 = m_xfu8.key_count() > 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            reg = (reg << 8) | data[i];
            if (i >= 1 && m_dfu.contains(static_cast<std::uint16_t>(reg))) {
                on_hit(i, FilterUnitKind::DFU);
            }
            if (has4 && i >= 3 && m_xfu4.contains(reg & 0xffffffffu)) {
                on_hit(i, FilterUnitKind::XFU4);
            }
            if (has8 && i >= 7 && m_xfu8.contains(reg)) {
                on_hit(i, FilterUnitKind::XFU8);
            }
        }
    }

    [[nodiscard]] const DirectFilterUnit& dfu() const { return m_dfu; }
    [[nodiscard]] const XorFilterUnit& xfu4() const { return m_xfu4; }
    [[nodiscard]] const XorFilterUnit& xfu8() const { return m_xfu8; }
    [[nodiscard]] std::size_t memory_bytes() const;

    [[nodiscard]] std::vector<std::uint8_t> serialize() const;
    static FilterBank deserialize(std::span<const std::uint8_t> blob);

private:
    DirectFilterUnit m_dfu;
    XorFilterUnit m_xfu4;
    XorFilterUnit m_xfu8;
};

struct FilterBuild {
    FilterBank bank;
    std::map<std::string, std::vector<std::uint32_t>> key_owners;  // concrete key -> lsRE ids
    std::size_t keys2 = 0;
    std::size_t keys4 = 0;
    std::size_t keys8 = 0;
};

/// Every ldRE must have length 2, 4 or 8 and expansion within config.max_expansion.
FilterBuild build_filter(const std::vector<LsReSplit>& splits, const CompileConfig& config);

}  // namespace xav
