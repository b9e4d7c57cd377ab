#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xav {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Little-endian append-only buffer for the on-disk formats.
class ByteWriter {
public:
    void u8(std::uint8_t v) { m_buf.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void bytes(std::span<const std::uint8_t> data) { m_buf.insert(m_buf.end(), data.begin(), data.end()); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        m_buf.insert(m_buf.end(), s.begin(), s.end());
    }
    void magic(std::string_view tag) { m_buf.insert(m_buf.end(), tag.begin(), tag.end()); }
    /// Length-prefixed nested blob.
    void blob(const std::vector<std::uint8_t>& data) {
        u64(data.size());
        bytes(data);
    }

    [[nodiscard]] const std::vector<std::uint8_t>& data() const { return m_buf; }
    std::vector<std::uint8_t> take() { return std::move(m_buf); }

private:
    void put(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) {
            m_buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::vector<std::uint8_t> m_buf;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : m_data(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() {
        std::uint64_t bits = u64();
        double v = 0;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto out = m_data.subspan(m_pos, n);
        m_pos += n;
        return out;
    }
    std::string str() {
        std::uint32_t n = u32();
        auto b = bytes(n);
        return {b.begin(), b.end()};
    }
    void expect_magic(std::string_view tag) {
        auto b = bytes(tag.size());
        if (std::string_view(reinterpret_cast<const char*>(b.data()), b.size()) != tag) {
            throw FormatError("bad magic: expected " + std::string(tag));
        }
    }
    std::vector<std::uint8_t> blob() {
        std::uint64_t n = u64();
        auto b = bytes(static_cast<std::size_t>(n));
        return {b.begin(), b.end()};
    }
    /// Element count, sanity-checked against the bytes left.
    std::size_t count(std::size_t min_element_size = 1) {
        std::uint64_t n = u64();
        if (min_element_size > 0 && n > remaining() / min_element_size) {
            throw FormatError("element count exceeds input size");
        }
        return static_cast<std::size_t>(n);
    }

    [[nodiscard]] std::size_t remaining() const { return m_data.size() - m_pos; }
    [[nodiscard]] bool done() const { return m_pos == m_data.size(); }

private:
    void need(std::size_t n) const {
        if (n > remaining()) {
            throw FormatError("unexpected end of input");
        }
    }
    std::uint64_t get(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(m_data[m_pos + static_cast<std::size_t>(i)]) << (8 * i);
        }
        m_pos += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> m_data;
    std::size_t m_pos = 0;
};

}  // namespace xav
