#include "xav/xor_filter.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace xav {

namespace {

std::uint64_t murmur64(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl64(std::uint64_t n, unsigned c) { return (n << c) | (n >> (64 - c)); }

std::uint32_t reduce(std::uint32_t hash, std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(hash) * n) >> 32);
}

std::uint16_t mask_for(std::uint32_t bits) {
    if (bits == 0 || bits > 16) {
        throw std::invalid_argument("fingerprint bits must be in [1, 16]");
    }
    return static_cast<std::uint16_t>(bits == 16 ? 0xffff : (1u << bits) - 1);
}

}  // namespace

std::uint64_t pack_key(std::span<const std::uint8_t> window) {
    if (window.size() > 8) {
        throw std::invalid_argument("key longer than 8 bytes");
    }
    std::uint64_t key = 0;
    for (std::uint8_t b : window) {
        key = (key << 8) | b;
    }
    return key;
}

std::size_t DirectFilterUnit::population() const {
    std::size_t n = 0;
    for (std::uint64_t w : m_words) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::uint64_t XorFilterUnit::hash(std::uint64_t key) const { return murmur64(key + m_seed); }

XorFilterUnit::Slots XorFilterUnit::slots(std::uint64_t h) const {
    return {reduce(static_cast<std::uint32_t>(h), m_block_length),
            reduce(static_cast<std::uint32_t>(rotl64(h, 21)), m_block_length) + m_block_length,
            reduce(static_cast<std::uint32_t>(rotl64(h, 42)), m_block_length) + 2 * m_block_length};
}

XorFilterUnit XorFilterUnit::build(std::vector<std::uint64_t> keys, std::uint32_t key_length,
                                   std::uint32_t fingerprint_bits, std::uint64_t base_seed) {
    if (key_length == 0 || key_length > 8) {
        throw std::invalid_argument("xor filter key length must be in [1, 8]");
    }
    XorFilterUnit f;
    f.m_key_length = key_length;
    f.m_bits = fingerprint_bits;
    f.m_mask = mask_for(fingerprint_bits);

    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    f.m_key_count = keys.size();
    if (keys.empty()) {
        return f;
    }

    const std::size_t n = keys.size();
    std::size_t capacity = static_cast<std::size_t>(1.23 * static_cast<double>(n)) + 32;
    f.m_block_length = static_cast<std::uint32_t>((capacity + 2) / 3);
    const std::size_t slots_total = 3 * static_cast<std::size_t>(f.m_block_length);

    std::vector<std::uint64_t> xor_mask(slots_total);
    std::vector<std::uint32_t> counts(slots_total);
    std::vector<std::uint32_t> queue;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> stack;
    queue.reserve(slots_total);
    stack.reserve(n);

    std::uint64_t seed_state = base_seed;
    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        f.m_seed = splitmix64(seed_state);
        std::fill(xor_mask.begin(), xor_mask.end(), 0);
        std::fill(counts.begin(), counts.end(), 0);
        queue.clear();
        stack.clear();

        for (std::uint64_t key : keys) {
            std::uint64_t h = f.hash(key);
            auto s = f.slots(h);
            for (std::uint32_t idx : {s.a, s.b, s.c}) {
                xor_mask[idx] ^= h;
                ++counts[idx];
            }
        }
        for (std::uint32_t i = 0; i < slots_total; ++i) {
            if (counts[i] == 1) {
                queue.push_back(i);
            }
        }
        while (!queue.empty()) {
            std::uint32_t idx = queue.back();
            queue.pop_back();
            if (counts[idx] != 1) {
                continue;
            }
            std::uint64_t h = xor_mask[idx];
            stack.emplace_back(idx, h);
            auto s = f.slots(h);
            for (std::uint32_t j : {s.a, s.b, s.c}) {
                xor_mask[j] ^= h;
                if (--counts[j] == 1) {
                    queue.push_back(j);
                }
            }
        }
        if (stack.size() != n) {
            continue;
        }

        f.m_attempts = attempt;
        f.m_fingerprints.assign(slots_total, 0);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            auto [idx, h] = *it;
            auto s = f.slots(h);
            std::uint16_t v = f.fingerprint(h);
            v ^= f.m_fingerprints[s.a] ^ f.m_fingerprints[s.b] ^ f.m_fingerprints[s.c];
            f.m_fingerprints[idx] = v;  // idx was zero, so it does not cancel itself
        }
        return f;
    }
    throw FilterBuildError("xor filter construction failed after " + std::to_string(kMaxAttempts) +
                           " attempts (" + std::to_string(n) + " keys)");
}

void XorFilterUnit::serialize(ByteWriter& out) const {
    out.u32(m_key_length);
    out.u32(m_bits);
    out.u64(m_seed);
    out.u32(m_block_length);
    out.u64(m_key_count);
    out.u32(static_cast<std::uint32_t>(m_attempts));
    out.u64(m_fingerprints.size());
    for (std::uint16_t v : m_fingerprints) {
        out.u16(v);
    }
}

XorFilterUnit XorFilterUnit::deserialize(ByteReader& in) {
    XorFilterUnit f;
    f.m_key_length = in.u32();
    f.m_bits = in.u32();
    f.m_mask = mask_for(f.m_bits);
    f.m_seed = in.u64();
    f.m_block_length = in.u32();
    f.m_key_count = static_cast<std::size_t>(in.u64());
    f.m_attempts = static_cast<int>(in.u32());
    std::size_t n = in.count(2);
    if (f.m_key_count > 0 && n != 3 * static_cast<std::size_t>(f.m_block_length)) {
        throw FormatError("xor filter slot count mismatch");
    }
    f.m_fingerprints.resize(n);
    for (auto& v : f.m_fingerprints) {
        v = in.u16();
    }
    return f;
}

bool FilterBank::query(std::span<const std::uint8_t> window) const {
    std::uint64_t key = window.size() <= 8 ? pack_key(window) : 0;
    switch (window.size()) {
        case 2:
            return m_dfu.contains(static_cast<std::uint16_t>(key));
        case 4:
            return m_xfu4.contains(key);
        case 8:
            return m_xfu8.contains(key);
        default:
            throw std::invalid_argument("filter window must be 2, 4 or 8 bytes");
    }
}

std::vector<FilterHit> FilterBank::scan(std::span<const std::uint8_t> data) const {
    std::vector<FilterHit> hits;
    scan_each(data, [&](std::size_t pos, FilterUnitKind unit) { hits.push_back({pos, unit}); });
    return hits;
}

std::size_t FilterBank::memory_bytes() const {
    return 65536 / 8 + (m_xfu4.memory_bits() + 7) / 8 + (m_xfu8.memory_bits() + 7) / 8;
}

std::vector<std::uint8_t> FilterBank::serialize() const {
    ByteWriter out;
    out.magic("XAVF");
    out.u32(1);
    for (std::uint64_t v : m_dfu.words()) {
        out.u64(v);
    }
    m_xfu4.serialize(out);
    m_xfu8.serialize(out);
    return out.take();
}

FilterBank FilterBank::deserialize(std::span<const std::uint8_t> blob) {
    ByteReader in(blob);
    in.expect_magic("XAVF");
    if (in.u32() != 1) {
        throw FormatError("unsupported filter version");
    }
    DirectFilterUnit dfu;
    for (std::size_t word = 0; word < DirectFilterUnit::kWords; ++word) {
        std::uint64_t v = in.u64();
        for (std::size_t b = 0; b < 64; ++b) {
            if ((v >> b) & 1u) {
                dfu.insert(static_cast<std::uint16_t>(word * 64 + b));
            }
        }
    }
    XorFilterUnit x4 = XorFilterUnit::deserialize(in);
    XorFilterUnit x8 = XorFilterUnit::deserialize(in);
    if (!in.done()) {
        throw FormatError("trailing bytes after filter bank");
    }
    return FilterBank(std::move(dfu), std::move(x4), std::move(x8));
}

FilterBuild build_filter(const std::vector<LsReSplit>& splits, const CompileConfig& config) {
    FilterBuild out;
    DirectFilterUnit dfu;
    std::set<std::uint64_t> keys4;
    std::set<std::uint64_t> keys8;
    std::set<std::uint16_t> keys2;
    for (const auto& split : splits) {
        std::size_t len = split.ldre.length();
        if (len != 2 && len != 4 && len != 8) {
            throw std::invalid_argument("ldRE length must be 2, 4 or 8");
        }
        if (split.ldre.expansion() > config.max_expansion) {
            throw std::invalid_argument("ldRE expansion exceeds the configured maximum");
        }
        for (const std::string& s : split.ldre.expand()) {
            auto bytes = std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
            std::uint64_t key = pack_key(bytes);
            if (len == 2) {
                keys2.insert(static_cast<std::uint16_t>(key));
            } else if (len == 4) {
                keys4.insert(key);
            } else {
                keys8.insert(key);
            }
            auto& owners = out.key_owners[s];
            if (owners.empty() || owners.back() != split.lsre_id) {
                owners.push_back(split.lsre_id);
            }
        }
    }
    for (auto& [key, owners] : out.key_owners) {
        std::sort(owners.begin(), owners.end());
        owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    }
    for (std::uint16_t k : keys2) {
        dfu.insert(k);
    }
    out.keys2 = keys2.size();
    out.keys4 = keys4.size();
    out.keys8 = keys8.size();
    auto x4 = XorFilterUnit::build({keys4.begin(), keys4.end()}, 4, config.fingerprint_bits);
    auto x8 = XorFilterUnit::build({keys8.begin(), keys8.end()}, 8, config.fingerprint_bits);
    out.bank = FilterBank(std::move(dfu), std::move(x4), std::move(x8));
    return out;
}

}  // namespace xav
