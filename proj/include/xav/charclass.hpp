#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <string>

namespace xav {

/// A set over the 256 byte values.
class CharClass {
public:
    CharClass() = default;

    static CharClass single(std::uint8_t byte) {
        CharClass c;
        c.m_bits.set(byte);
        return c;
    }

    static CharClass range(std::uint8_t lo, std::uint8_t hi) {
        CharClass c;
        for (unsigned b = lo; b <= hi; ++b) {
            c.m_bits.set(b);
        }
        return c;
    }

    static CharClass full() {
        CharClass c;
        c.m_bits.set();
        return c;
    }

    static CharClass digit() { return range('0', '9'); }

    static CharClass space() {
        CharClass c;
        for (char ch : {' ', '\t', '\n', '\v', '\f', '\r'}) {
            c.add(static_cast<std::uint8_t>(ch));
        }
        return c;
    }

    static CharClass word() {
        CharClass c = range('a', 'z');
        c |= range('A', 'Z');
        c |= range('0', '9');
        c.add('_');
        return c;
    }

    void add(std::uint8_t byte) { m_bits.set(byte); }
    void remove(std::uint8_t byte) { m_bits.reset(byte); }

    [[nodiscard]] bool contains(std::uint8_t byte) const { return m_bits.test(byte); }
    [[nodiscard]] std::size_t population() const { return m_bits.count(); }
    [[nodiscard]] bool empty() const { return m_bits.none(); }
    [[nodiscard]] bool is_full() const { return m_bits.all(); }

    /// Probability that a uniformly random byte falls in the class.
    [[nodiscard]] double probability() const { return static_cast<double>(population()) / 256.0; }

    [[nodiscard]] CharClass complement() const {
        CharClass c;
        c.m_bits = ~m_bits;
        return c;
    }

    CharClass& operator|=(const CharClass& other) {
        m_bits |= other.m_bits;
        return *this;
    }

    CharClass& operator&=(const CharClass& other) {
        m_bits &= other.m_bits;
        return *this;
    }

    [[nodiscard]] const std::bitset<256>& bits() const { return m_bits; }

    /// Smallest member; the class must not be empty.
    [[nodiscard]] std::uint8_t first() const {
        for (unsigned b = 0; b < 256; ++b) {
            if (m_bits.test(b)) {
                return static_cast<std::uint8_t>(b);
            }
        }
        return 0;
    }

    /// Regex source form: `.`, a single escaped literal, or a bracket expression.
    [[nodiscard]] std::string to_pattern() const;

    friend bool operator==(const CharClass&, const CharClass&) = default;

private:
    std::bitset<256> m_bits;
};

/// Strict weak ordering used for deterministic containers.
struct CharClassLess {
    bool operator()(const CharClass& a, const CharClass& b) const {
        for (int w = 0; w < 4; ++w) {
            std::uint64_t wa = 0;
            std::uint64_t wb = 0;
            for (int i = 0; i < 64; ++i) {
                wa |= static_cast<std::uint64_t>(a.bits()[static_cast<std::size_t>(w * 64 + i)]) << i;
                wb |= static_cast<std::uint64_t>(b.bits()[static_cast<std::size_t>(w * 64 + i)]) << i;
            }
            if (wa != wb) {
                return wa < wb;
            }
        }
        return false;
    }
};

}  // namespace xav
