#include "xav/automata.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>
#include <utility>

namespace xav {

std::size_t Nfa::transition_count() const {
    std::size_t n = 0;
    for (const auto& s : states) {
        n += s.eps.size() + (s.cls == kNoClass ? 0 : 1);
    }
    return n;
}

namespace {

struct Frag {
    std::uint32_t in;
    std::uint32_t out;
};

class ThompsonBuilder {
public:
    ThompsonBuilder(Nfa& nfa, std::size_t cap) : m_nfa(nfa), m_cap(cap) {}

    std::uint32_t fresh() {
        if (m_nfa.states.size() >= m_cap) {
            throw StateExplosion("NFA exceeds " + std::to_string(m_cap) + " states", m_nfa.states.size());
        }
        m_nfa.states.emplace_back();
        return static_cast<std::uint32_t>(m_nfa.states.size() - 1);
    }

    std::uint32_t class_id(const CharClass& c) {
        auto [it, inserted] = m_class_ids.try_emplace(c, static_cast<std::uint32_t>(m_nfa.classes.size()));
        if (inserted) {
            m_nfa.classes.push_back(c);
        }
        return it->second;
    }

    void link(std::uint32_t from, std::uint32_t to) { m_nfa.states[from].eps.push_back(to); }

    Frag build(const Node& node) {
        switch (node.kind) {
            case NodeKind::Class: {
                std::uint32_t s = fresh();
                std::uint32_t t = fresh();
                m_nfa.states[s].cls = class_id(node.cls);
                m_nfa.states[s].target = t;
                return {s, t};
            }
            case NodeKind::Concat: {
                if (node.children.empty()) {
                    std::uint32_t s = fresh();
                    return {s, s};
                }
                Frag first = build(node.children[0]);
                std::uint32_t out = first.out;
                for (std::size_t i = 1; i < node.children.size(); ++i) {
                    Frag f = build(node.children[i]);
                    link(out, f.in);
                    out = f.out;
                }
                return {first.in, out};
            }
            case NodeKind::Alt: {
                std::uint32_t s = fresh();
                std::uint32_t t = fresh();
                for (const Node& c : node.children) {
                    Frag f = build(c);
                    link(s, f.in);
                    link(f.out, t);
                }
                return {s, t};
            }
            case NodeKind::Repeat: {
                const Node& child = node.children.at(0);
                std::uint32_t s = fresh();
                std::uint32_t cur = s;
                for (std::uint32_t i = 0; i < node.min; ++i) {
                    Frag f = build(child);
                    link(cur, f.in);
                    cur = f.out;
                }
                if (node.max == Node::kInfinite) {
                    std::uint32_t hub = fresh();
                    link(cur, hub);
                    Frag f = build(child);
                    link(hub, f.in);
                    link(f.out, hub);
                    return {s, hub};
                }
                if (node.max == node.min) {
                    return {s, cur};
                }
                std::uint32_t end = fresh();
                for (std::uint32_t i = node.min; i < node.max; ++i) {
                    Frag f = build(child);
                    link(cur, end);
                    link(cur, f.in);
                    cur = f.out;
                }
                link(cur, end);
                return {s, end};
            }
        }
        throw std::logic_error("unknown node kind");
    }

private:
    Nfa& m_nfa;
    std::size_t m_cap;
    std::map<CharClass, std::uint32_t, CharClassLess> m_class_ids;
};

void add_label(std::vector<std::uint32_t>& labels, std::uint32_t label) {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        labels.insert(it, label);
    }
}

/// Coarsest byte partition that respects every NFA class.
std::vector<std::uint8_t> partition_bytes(const std::vector<CharClass>& classes, std::uint32_t& count) {
    std::vector<std::uint32_t> group(256, 0);
    std::uint32_t groups = 1;
    for (const CharClass& c : classes) {
        std::vector<std::int64_t> remap(2 * static_cast<std::size_t>(groups), -1);
        std::uint32_t next = 0;
        for (int b = 0; b < 256; ++b) {
            std::size_t key = 2 * static_cast<std::size_t>(group[b]) + (c.contains(static_cast<std::uint8_t>(b)) ? 1 : 0);
            if (remap[key] < 0) {
                remap[key] = next++;
            }
            group[b] = static_cast<std::uint32_t>(remap[key]);
        }
        groups = next;
    }
    count = groups;
    return {group.begin(), group.end()};
}

std::uint64_t hash_span(const std::uint32_t* p, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ n;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return h;
}

/// Interns sorted NFA-state subsets; id 0 is the empty subset.
class SubsetTable {
public:
    SubsetTable() {
        m_offsets.push_back(0);
        m_offsets.push_back(0);
        m_slots.assign(1024, 0);
        insert_slot(0, hash_span(nullptr, 0));
    }

    /// Returns (id, inserted).
    std::pair<std::uint32_t, bool> intern(const std::vector<std::uint32_t>& subset) {
        std::uint64_t h = hash_span(subset.data(), subset.size());
        std::size_t mask = m_slots.size() - 1;
        for (std::size_t i = h & mask;; i = (i + 1) & mask) {
            std::uint32_t slot = m_slots[i];
            if (slot == 0) {
                break;
            }
            std::uint32_t id = slot - 1;
            if (m_hashes[id] == h && equal(id, subset)) {
                return {id, false};
            }
        }
        auto id = static_cast<std::uint32_t>(m_offsets.size() - 1);
        m_pool.insert(m_pool.end(), subset.begin(), subset.end());
        m_offsets.push_back(m_pool.size());
        insert_slot(id, h);
        return {id, true};
    }

    [[nodiscard]] std::size_t size() const { return m_offsets.size() - 1; }
    [[nodiscard]] std::span<const std::uint32_t> get(std::uint32_t id) const {
        return {m_pool.data() + m_offsets[id], m_offsets[id + 1] - m_offsets[id]};
    }

private:
    bool equal(std::uint32_t id, const std::vector<std::uint32_t>& subset) const {
        auto s = get(id);
        return s.size() == subset.size() && std::equal(s.begin(), s.end(), subset.begin());
    }

    void insert_slot(std::uint32_t id, std::uint64_t h) {
        if (m_hashes.size() <= id) {
            m_hashes.resize(id + 1);
        }
        m_hashes[id] = h;
        if (2 * (size() + 1) > m_slots.size()) {
            std::vector<std::uint32_t> old(m_slots.size() * 2, 0);
            std::swap(old, m_slots);
            std::size_t mask = m_slots.size() - 1;
            for (std::uint32_t slot : old) {
                if (slot == 0 || slot - 1 == id) {
                    continue;
                }
                place(slot, m_hashes[slot - 1], mask);
            }
        }
        place(id + 1, h, m_slots.size() - 1);
    }

    void place(std::uint32_t slot, std::uint64_t h, std::size_t mask) {
        std::size_t i = h & mask;
        while (m_slots[i] != 0) {
            i = (i + 1) & mask;
        }
        m_slots[i] = slot;
    }

    std::vector<std::uint32_t> m_pool;
    std::vector<std::size_t> m_offsets;
    std::vector<std::uint64_t> m_hashes;
    std::vector<std::uint32_t> m_slots;
};

class Closure {
public:
    explicit Closure(const Nfa& nfa) : m_nfa(nfa), m_stamp(nfa.size(), 0) {}

    /// Sorted significant states reachable from seeds through epsilon edges.
    void compute(const std::vector<std::uint32_t>& seeds, std::vector<std::uint32_t>& out) {
        out.clear();
        ++m_epoch;
        m_stack.clear();
        for (std::uint32_t s : seeds) {
            if (m_stamp[s] != m_epoch) {
                m_stamp[s] = m_epoch;
                m_stack.push_back(s);
            }
        }
        while (!m_stack.empty()) {
            std::uint32_t q = m_stack.back();
            m_stack.pop_back();
            const auto& st = m_nfa.states[q];
            if (st.cls != Nfa::kNoClass || !st.labels.empty()) {
                out.push_back(q);
            }
            for (std::uint32_t e : st.eps) {
                if (m_stamp[e] != m_epoch) {
                    m_stamp[e] = m_epoch;
                    m_stack.push_back(e);
                }
            }
        }
        std::sort(out.begin(), out.end());
    }

private:
    const Nfa& m_nfa;
    std::vector<std::uint32_t> m_stamp;
    std::uint32_t m_epoch = 0;
    std::vector<std::uint32_t> m_stack;
};

}  // namespace

Nfa thompson(const std::vector<NfaPattern>& patterns, std::size_t state_cap, bool separate_entries) {
    Nfa nfa;
    ThompsonBuilder b(nfa, state_cap);
    std::vector<std::uint32_t> entries;
    if (!separate_entries && patterns.size() != 1) {
        nfa.starts.push_back(b.fresh());
    }
    for (const NfaPattern& p : patterns) {
        Frag f = b.build(p.tree);
        add_label(nfa.states[f.out].labels, p.label);
        entries.push_back(f.in);
    }
    if (separate_entries || patterns.size() == 1) {
        nfa.starts = entries;
    } else {
        for (std::uint32_t e : entries) {
            b.link(nfa.starts[0], e);
        }
    }
    return nfa;
}

Nfa thompson(const std::vector<ComponentTree>& trees, std::size_t state_cap) {
    std::vector<NfaPattern> patterns;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        patterns.push_back({trees[i].root, static_cast<std::uint32_t>(i)});
    }
    return thompson(patterns, state_cap);
}

Dfa Dfa::empty() {
    Dfa d;
    d.num_classes = 1;
    d.table = {kDead};
    d.accepts = {{}};
    d.starts = {kDead};
    return d;
}

const std::vector<std::uint32_t>& Dfa::run(std::span<const std::uint8_t> data, std::uint32_t entry) const {
    std::uint32_t s = starts.at(entry);
    for (std::uint8_t b : data) {
        s = next(s, b);
        if (s == kDead) {
            break;
        }
    }
    return accepts[s];
}

Dfa determinize(const Nfa& nfa, std::size_t state_cap) {
    Dfa dfa;
    std::vector<std::uint8_t> groups = partition_bytes(nfa.classes, dfa.num_classes);
    std::copy(groups.begin(), groups.end(), dfa.byte_class.begin());
    const std::uint32_t C = dfa.num_classes;

    // alphabet classes covered by each NFA class
    std::vector<std::uint8_t> rep(C);
    std::vector<bool> seen(C, false);
    for (int b = 255; b >= 0; --b) {
        rep[dfa.byte_class[b]] = static_cast<std::uint8_t>(b);
        seen[dfa.byte_class[b]] = true;
    }
    std::vector<std::vector<std::uint32_t>> cover(nfa.classes.size());
    for (std::size_t c = 0; c < nfa.classes.size(); ++c) {
        for (std::uint32_t a = 0; a < C; ++a) {
            if (nfa.classes[c].contains(rep[a])) {
                cover[c].push_back(a);
            }
        }
    }

    SubsetTable subsets;
    Closure closure(nfa);
    std::vector<std::uint32_t> scratch;
    auto check_cap = [&] {
        if (subsets.size() > state_cap) {
            throw StateExplosion("DFA exceeds " + std::to_string(state_cap) + " states", subsets.size());
        }
    };

    dfa.starts.clear();
    for (std::uint32_t s : nfa.starts) {
        closure.compute({s}, scratch);
        dfa.starts.push_back(subsets.intern(scratch).first);
        check_cap();
    }
    if (dfa.starts.empty()) {
        dfa.starts.push_back(Dfa::kDead);
    }

    std::vector<std::vector<std::uint32_t>> buckets(C);
    std::vector<std::uint32_t> row(C);
    dfa.table.assign(C, Dfa::kDead);  // dead row
    dfa.accepts.emplace_back();
    for (std::uint32_t id = 1; id < subsets.size(); ++id) {
        for (auto& bucket : buckets) {
            bucket.clear();
        }
        std::vector<std::uint32_t> labels;
        {
            auto members = subsets.get(id);
            for (std::uint32_t q : members) {
                const auto& st = nfa.states[q];
                for (std::uint32_t l : st.labels) {
                    add_label(labels, l);
                }
                if (st.cls != Nfa::kNoClass) {
                    for (std::uint32_t a : cover[st.cls]) {
                        buckets[a].push_back(st.target);
                    }
                }
            }
        }
        for (std::uint32_t a = 0; a < C; ++a) {
            if (buckets[a].empty()) {
                row[a] = Dfa::kDead;
                continue;
            }
            // identical buckets are common (wide classes); reuse the previous answer
            if (a > 0 && buckets[a] == buckets[a - 1]) {
                row[a] = row[a - 1];
                continue;
            }
            closure.compute(buckets[a], scratch);
            row[a] = subsets.intern(scratch).first;
            check_cap();
        }
        dfa.table.insert(dfa.table.end(), row.begin(), row.end());
        dfa.accepts.push_back(std::move(labels));
    }
    return dfa;
}

Dfa minimize(const Dfa& dfa) {
    const std::size_t N = dfa.size();
    const std::uint32_t C = dfa.num_classes;
    if (N <= 1) {
        return dfa;
    }

    // refinable partition
    std::vector<std::uint32_t> elems(N);
    std::vector<std::uint32_t> loc(N);
    std::vector<std::uint32_t> blk(N);
    struct Block {
        std::uint32_t begin, end, mid;
    };
    std::vector<Block> blocks;
    {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> sizes;
        for (std::size_t s = 0; s < N; ++s) {
            auto [it, inserted] = ids.try_emplace(dfa.accepts[s], static_cast<std::uint32_t>(sizes.size()));
            if (inserted) {
                sizes.push_back(0);
            }
            blk[s] = it->second;
            ++sizes[it->second];
        }
        std::uint32_t pos = 0;
        for (std::uint32_t sz : sizes) {
            blocks.push_back({pos, pos, pos});
            pos += sz;
        }
        for (std::size_t s = 0; s < N; ++s) {
            Block& b = blocks[blk[s]];
            elems[b.end] = static_cast<std::uint32_t>(s);
            loc[s] = b.end++;
        }
        for (Block& b : blocks) {
            b.mid = b.begin;
        }
    }

    // inverse transitions grouped by target
    std::vector<std::uint32_t> inv_off(N + 1, 0);
    for (std::size_t s = 0; s < N; ++s) {
        for (std::uint32_t a = 0; a < C; ++a) {
            ++inv_off[dfa.table[s * C + a] + 1];
        }
    }
    for (std::size_t t = 0; t < N; ++t) {
        inv_off[t + 1] += inv_off[t];
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> inv(N * C);
    {
        std::vector<std::uint32_t> fill(inv_off.begin(), inv_off.end() - 1);
        for (std::size_t s = 0; s < N; ++s) {
            for (std::uint32_t a = 0; a < C; ++a) {
                std::uint32_t t = dfa.table[s * C + a];
                inv[fill[t]++] = {static_cast<std::uint32_t>(s), a};
            }
        }
    }

    std::vector<std::uint32_t> work;
    std::vector<bool> in_work;
    for (std::uint32_t b = 0; b < blocks.size(); ++b) {
        work.push_back(b);
        in_work.push_back(true);
    }
    std::vector<std::vector<std::uint32_t>> touched_states(C);
    std::vector<std::uint32_t> touched_blocks;

    while (!work.empty()) {
        std::uint32_t splitter = work.back();
        work.pop_back();
        in_work[splitter] = false;
        for (auto& v : touched_states) {
            v.clear();
        }
        const Block sb = blocks[splitter];
        for (std::uint32_t i = sb.begin; i < sb.end; ++i) {
            std::uint32_t t = elems[i];
            for (std::uint32_t k = inv_off[t]; k < inv_off[t + 1]; ++k) {
                touched_states[inv[k].second].push_back(inv[k].first);
            }
        }
        for (std::uint32_t a = 0; a < C; ++a) {
            if (touched_states[a].empty()) {
                continue;
            }
            touched_blocks.clear();
            for (std::uint32_t s : touched_states[a]) {
                std::uint32_t y = blk[s];
                Block& b = blocks[y];
                if (b.mid == b.begin) {
                    touched_blocks.push_back(y);
                }
                std::uint32_t p = loc[s];
                std::uint32_t q = b.mid;
                std::uint32_t other = elems[q];
                elems[q] = s;
                loc[s] = q;
                elems[p] = other;
                loc[other] = p;
                ++b.mid;
            }
            for (std::uint32_t y : touched_blocks) {
                Block& b = blocks[y];
                if (b.mid == b.end) {
                    b.mid = b.begin;
                    continue;
                }
                auto z = static_cast<std::uint32_t>(blocks.size());
                Block nb{b.begin, b.mid, b.begin};
                b.begin = b.mid;
                blocks.push_back(nb);
                in_work.push_back(false);
                for (std::uint32_t i = nb.begin; i < nb.end; ++i) {
                    blk[elems[i]] = z;
                }
                const Block& yb = blocks[y];
                if (in_work[y]) {
                    work.push_back(z);
                    in_work[z] = true;
                } else if (nb.end - nb.begin <= yb.end - yb.begin) {
                    work.push_back(z);
                    in_work[z] = true;
                } else {
                    work.push_back(y);
                    in_work[y] = true;
                }
            }
        }
    }

    // renumber: dead block first, then BFS from the entries
    const std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> new_id(blocks.size(), unset);
    std::vector<std::uint32_t> order;
    new_id[blk[Dfa::kDead]] = 0;
    order.push_back(blk[Dfa::kDead]);
    Dfa out;
    out.byte_class = dfa.byte_class;
    out.num_classes = C;
    for (std::uint32_t s : dfa.starts) {
        std::uint32_t b = blk[s];
        if (new_id[b] == unset) {
            new_id[b] = static_cast<std::uint32_t>(order.size());
            order.push_back(b);
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t rep = elems[blocks[order[i]].begin];
        for (std::uint32_t a = 0; a < C; ++a) {
            std::uint32_t b = blk[dfa.table[static_cast<std::size_t>(rep) * C + a]];
            if (new_id[b] == unset) {
                new_id[b] = static_cast<std::uint32_t>(order.size());
                order.push_back(b);
            }
        }
    }
    out.table.resize(order.size() * C);
    out.accepts.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t rep = elems[blocks[order[i]].begin];
        for (std::uint32_t a = 0; a < C; ++a) {
            out.table[i * C + a] = new_id[blk[dfa.table[static_cast<std::size_t>(rep) * C + a]]];
        }
        out.accepts[i] = dfa.accepts[rep];
    }
    out.starts.clear();
    for (std::uint32_t s : dfa.starts) {
        out.starts.push_back(new_id[blk[s]]);
    }
    return out;
}

Dfa compile_dfa(const std::vector<NfaPattern>& patterns, const CompileConfig& config, bool separate_entries) {
    if (patterns.empty()) {
        return Dfa::empty();
    }
    Nfa nfa = thompson(patterns, config.nfa_state_cap, separate_entries);
    return minimize(determinize(nfa, config.dfa_state_cap));
}

CompressedStt::CompressedStt(const Dfa& dfa) {
    const std::size_t N = dfa.size();
    m_bitmaps.assign(N, {0, 0, 0, 0});
    m_offsets.reserve(N + 1);
    m_offsets.push_back(0);
    for (std::size_t s = 0; s < N; ++s) {
        std::uint32_t prev = Dfa::kDead;
        for (int b = 0; b < 256; ++b) {
            std::uint32_t succ = dfa.next(static_cast<std::uint32_t>(s), static_cast<std::uint8_t>(b));
            if (succ != prev) {
                m_bitmaps[s][b >> 6] |= std::uint64_t{1} << (b & 63);
                m_succ.push_back(succ);
                prev = succ;
            }
        }
        m_offsets.push_back(static_cast<std::uint32_t>(m_succ.size()));
    }
    m_accepts = dfa.accepts;
    m_starts = dfa.starts;
}

std::size_t CompressedStt::compressed_bytes() const {
    return m_bitmaps.size() * sizeof(std::array<std::uint64_t, 4>) + m_offsets.size() * sizeof(std::uint32_t) +
           m_succ.size() * sizeof(std::uint32_t);
}

double CompressedStt::compression_ratio() const {
    if (dense_bytes() == 0) {
        return 0.0;
    }
    return static_cast<double>(compressed_bytes()) / static_cast<double>(dense_bytes());
}

std::vector<std::uint8_t> CompressedStt::serialize() const {
    ByteWriter out;
    out.magic("XAVS");
    out.u32(1);
    out.u64(m_bitmaps.size());
    out.u32(0);  // dead state id
    out.u64(m_starts.size());
    for (std::uint32_t s : m_starts) {
        out.u32(s);
    }
    for (std::size_t s = 0; s < m_bitmaps.size(); ++s) {
        for (std::uint64_t w : m_bitmaps[s]) {
            out.u64(w);
        }
        std::uint32_t n = m_offsets[s + 1] - m_offsets[s];
        out.u32(n);
        for (std::uint32_t i = m_offsets[s]; i < m_offsets[s + 1]; ++i) {
            out.u32(m_succ[i]);
        }
    }
    for (const auto& labels : m_accepts) {
        out.u32(static_cast<std::uint32_t>(labels.size()));
        for (std::uint32_t l : labels) {
            out.u32(l);
        }
    }
    return out.take();
}

CompressedStt CompressedStt::deserialize(std::span<const std::uint8_t> blob) {
    ByteReader in(blob);
    in.expect_magic("XAVS");
    if (in.u32() != 1) {
        throw FormatError("unsupported STT version");
    }
    CompressedStt stt;
    std::size_t n = in.count(36);
    if (in.u32() != 0) {
        throw FormatError("unexpected dead state id");
    }
    std::size_t starts = in.count(4);
    for (std::size_t i = 0; i < starts; ++i) {
        std::uint32_t s = in.u32();
        if (s >= n && !(n == 0 && s == 0)) {
            throw FormatError("start state out of range");
        }
        stt.m_starts.push_back(s);
    }
    stt.m_bitmaps.resize(n);
    stt.m_offsets.push_back(0);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto& w : stt.m_bitmaps[s]) {
            w = in.u64();
        }
        std::uint32_t k = in.u32();
        std::size_t bits = 0;
        for (std::uint64_t w : stt.m_bitmaps[s]) {
            bits += static_cast<std::size_t>(std::popcount(w));
        }
        if (k != bits) {
            throw FormatError("successor count does not match bitmap");
        }
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint32_t t = in.u32();
            if (t >= n) {
                throw FormatError("successor out of range");
            }
            stt.m_succ.push_back(t);
        }
        stt.m_offsets.push_back(static_cast<std::uint32_t>(stt.m_succ.size()));
    }
    stt.m_accepts.resize(n);
    for (auto& labels : stt.m_accepts) {
        std::uint32_t k = in.u32();
        if (k > in.remaining() / 4) {
            throw FormatError("accept list exceeds input size");
        }
        for (std::uint32_t i = 0; i < k; ++i) {
            labels.push_back(in.u32());
        }
    }
    if (!in.done()) {
        throw FormatError("trailing bytes after STT");
    }
    return stt;
}

ThreadResult run_thread(const CompressedStt& stt, std::span<const std::uint8_t> data, std::size_t offset,
                        Direction dir, std::uint32_t entry) {
    ThreadResult r;
    std::uint32_t s = entry == kStartState ? stt.start() : entry;
    r.transitions = run_thread_each(stt, data, offset, dir, s, [&](const std::vector<std::uint32_t>& labels,
                                                                  std::size_t depth) {
        for (std::uint32_t l : labels) {
            ThreadAccept a{l, depth, 0, 0};
            if (dir == Direction::Forward) {
                a.begin = offset;
                a.end = offset + depth;
            } else {
                a.begin = offset + 1 - depth;
                a.end = offset + 1;
            }
            r.accepts.push_back(a);
        }
    });
    return r;
}

Dfa build_reverse_dfa(const std::vector<LsReSplit>& splits, const CompileConfig& config) {
    std::vector<NfaPattern> patterns;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        patterns.push_back({reverse_node(splits[i].front), static_cast<std::uint32_t>(i)});
    }
    return compile_dfa(patterns, config);
}

ForwardDfa build_forward_dfa(const std::vector<LsReSplit>& splits, const CompileConfig& config) {
    ForwardDfa f;
    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (!splits[i].has_back()) {
            f.back_of_split.push_back(-1);
            continue;
        }
        std::string key = to_pattern(splits[i].back);
        auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(f.backs.size()));
        if (inserted) {
            f.backs.push_back(splits[i].back);
            f.splits_of_back.emplace_back();
        }
        f.back_of_split.push_back(static_cast<std::int32_t>(it->second));
        f.splits_of_back[it->second].push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<NfaPattern> patterns;
    for (std::size_t b = 0; b < f.backs.size(); ++b) {
        patterns.push_back({f.backs[b], static_cast<std::uint32_t>(b)});
    }
    f.dfa = compile_dfa(patterns, config, true);
    return f;
}

Dfa build_classic_dfa(const std::vector<ComponentTree>& trees, const CompileConfig& config, bool minimized) {
    if (trees.empty()) {
        return Dfa::empty();
    }
    std::vector<NfaPattern> patterns;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        Node n = trees[i].root;
        if (!trees[i].leading_anchor) {
            n = Node::make_concat({Node::make_repeat(Node::make_class(CharClass::full()), 0, Node::kInfinite), n});
        }
        patterns.push_back({std::move(n), static_cast<std::uint32_t>(i)});
    }
    Nfa nfa = thompson(patterns, config.nfa_state_cap);
    Dfa d = determinize(nfa, config.dfa_state_cap);
    return minimized ? minimize(d) : d;
}

}  // namespace xav
