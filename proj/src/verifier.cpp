#include "xav/verifier.hpp"

#include <algorithm>

namespace xav {

namespace {

CompressedStt compile_fragment(const Node& tree, const CompileConfig& config) {
    try {
        return CompressedStt(compile_dfa({NfaPattern{tree, 0}}, config));
    } catch (const StateExplosion& e) {
        throw UnsupportedRule(std::string("lusDFA too large: ") + e.what());
    }
}

void write_class(const CharClass& c, ByteWriter& out) {
    for (int w = 0; w < 4; ++w) {
        std::uint64_t v = 0;
        for (int b = 0; b < 64; ++b) {
            if (c.contains(static_cast<std::uint8_t>(w * 64 + b))) {
                v |= std::uint64_t{1} << b;
            }
        }
        out.u64(v);
    }
}

CharClass read_class(ByteReader& in) {
    CharClass c;
    for (int w = 0; w < 4; ++w) {
        std::uint64_t v = in.u64();
        for (int b = 0; b < 64; ++b) {
            if ((v >> b) & 1u) {
                c.add(static_cast<std::uint8_t>(w * 64 + b));
            }
        }
    }
    return c;
}

}  // namespace

LusReCheck classify_lusre(const Fragment& fragment, const CompileConfig& config, bool with_reverse) {
    LusReCheck c;
    const Node& t = fragment.tree;
    if (t.is_empty()) {
        return c;
    }
    const Node* cls = nullptr;
    std::uint32_t lo = 1;
    std::uint32_t hi = 1;
    if (t.kind == NodeKind::Class) {
        cls = &t;
    } else if (t.kind == NodeKind::Repeat && t.child().kind == NodeKind::Class) {
        cls = &t.child();
        lo = t.min;
        hi = t.max;
    }
    if (cls != nullptr) {
        c.kind = cls->cls.is_full() ? LusReKind::DotMN : LusReKind::CCMN;
        c.cls = cls->cls;
        c.min = lo;
        c.max = hi;
        return c;
    }
    c.kind = LusReKind::Complex;
    c.exact = compile_fragment(t, config);
    if (with_reverse) {
        c.reversed = compile_fragment(reverse_node(t), config);
    }
    return c;
}

RuleTable build_rule_table(const DecomposedRule& rule, const CompileConfig& config) {
    RuleTable table;
    table.rule_id = rule.rule_id;
    table.leading_anchor = rule.leading_anchor;
    table.trailing_anchor = rule.trailing_anchor;
    const std::size_t n = rule.lsre_count();
    for (std::size_t k = 1; k <= n + 1; ++k) {
        bool reverse = k == 1 && !rule.leading_anchor;
        table.gaps.push_back(classify_lusre(rule.lusre(k), config, reverse));
    }
    return table;
}

void serialize_rule_table(const RuleTable& table, ByteWriter& out) {
    out.u32(table.rule_id);
    out.u8(table.leading_anchor ? 1 : 0);
    out.u8(table.trailing_anchor ? 1 : 0);
    out.u64(table.gaps.size());
    for (const LusReCheck& g : table.gaps) {
        out.u8(static_cast<std::uint8_t>(g.kind));
        write_class(g.cls, out);
        out.u32(g.min);
        out.u32(g.max);
        if (g.kind == LusReKind::Complex) {
            out.blob(g.exact.serialize());
            out.u8(g.reversed.size() > 0 ? 1 : 0);
            if (g.reversed.size() > 0) {
                out.blob(g.reversed.serialize());
            }
        }
    }
}

RuleTable deserialize_rule_table(ByteReader& in) {
    RuleTable t;
    t.rule_id = in.u32();
    t.leading_anchor = in.u8() != 0;
    t.trailing_anchor = in.u8() != 0;
    std::size_t n = in.count(41);
    for (std::size_t i = 0; i < n; ++i) {
        LusReCheck g;
        std::uint8_t kind = in.u8();
        if (kind > static_cast<std::uint8_t>(LusReKind::Complex)) {
            throw FormatError("bad lusRE kind");
        }
        g.kind = static_cast<LusReKind>(kind);
        g.cls = read_class(in);
        g.min = in.u32();
        g.max = in.u32();
        if (g.kind == LusReKind::Complex) {
            g.exact = CompressedStt::deserialize(in.blob());
            if (in.u8() != 0) {
                g.reversed = CompressedStt::deserialize(in.blob());
            }
        }
        t.gaps.push_back(std::move(g));
    }
    if (t.gaps.empty()) {
        throw FormatError("rule table without fragments");
    }
    return t;
}

bool check_gap(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t begin, std::size_t end,
               CheckCost* cost) {
    if (end < begin || end > data.size()) {
        return false;
    }
    const std::size_t len = end - begin;
    switch (check.kind) {
        case LusReKind::Empty:
            return len == 0;
        case LusReKind::DotMN:
            return len >= check.min && (check.max == Node::kInfinite || len <= check.max);
        case LusReKind::CCMN: {
            if (len < check.min || (check.max != Node::kInfinite && len > check.max)) {
                return false;
            }
            if (cost) cost->escalated = true;
            for (std::size_t i = begin; i < end; ++i) {
                if (cost) ++cost->bytes;
                if (!check.cls.contains(data[i])) {
                    return false;
                }
            }
            return true;
        }
        case LusReKind::Complex: {
            if (cost) cost->escalated = true;
            std::uint32_t s = check.exact.start();
            for (std::size_t i = begin; i < end && s != 0; ++i) {
                if (cost) ++cost->bytes;
                s = check.exact.next(s, data[i]);
            }
            return s != 0 && check.exact.accepting(s);
        }
    }
    return false;
}

bool check_unanchored_prefix(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t end,
                             CheckCost* cost) {
    switch (check.kind) {
        case LusReKind::Empty:
            return true;
        case LusReKind::DotMN:
            return end >= check.min;
        case LusReKind::CCMN: {
            if (end < check.min) {
                return false;
            }
            if (cost) cost->escalated = true;
            for (std::size_t i = 0; i < check.min; ++i) {
                if (cost) ++cost->bytes;
                if (!check.cls.contains(data[end - 1 - i])) {
                    return false;
                }
            }
            return true;
        }
        case LusReKind::Complex: {
            if (cost) cost->escalated = true;
            const CompressedStt& r = check.reversed;
            std::uint32_t s = r.size() == 0 ? 0 : r.start();
            if (s == 0) {
                return false;
            }
            if (r.accepting(s)) {
                return true;
            }
            for (std::size_t i = end; i-- > 0;) {
                if (cost) ++cost->bytes;
                s = r.next(s, data[i]);
                if (s == 0) {
                    return false;
                }
                if (r.accepting(s)) {
                    return true;
                }
            }
            return false;
        }
    }
    return false;
}

bool find_suffix_end(const LusReCheck& check, std::span<const std::uint8_t> data, std::size_t begin,
                     std::size_t& end_out, CheckCost* cost) {
    const std::size_t remaining = begin <= data.size() ? data.size() - begin : 0;
    switch (check.kind) {
        case LusReKind::Empty:
            end_out = begin - 1;
            return true;
        case LusReKind::DotMN:
            if (remaining < check.min) {
                return false;
            }
            end_out = begin + check.min - 1;
            return true;
        case LusReKind::CCMN:
            if (remaining < check.min) {
                return false;
            }
            if (cost) cost->escalated = true;
            for (std::size_t i = 0; i < check.min; ++i) {
                if (cost) ++cost->bytes;
                if (!check.cls.contains(data[begin + i])) {
                    return false;
                }
            }
            end_out = begin + check.min - 1;
            return true;
        case LusReKind::Complex: {
            if (cost) cost->escalated = true;
            std::uint32_t s = check.exact.start();
            if (s != 0 && check.exact.accepting(s)) {
                end_out = begin - 1;
                return true;
            }
            for (std::size_t i = begin; i < data.size() && s != 0; ++i) {
                if (cost) ++cost->bytes;
                s = check.exact.next(s, data[i]);
                if (s != 0 && check.exact.accepting(s)) {
                    end_out = i;
                    return true;
                }
            }
            return false;
        }
    }
    return false;
}

Verifier::Verifier(const std::vector<RuleTable>& tables, std::uint32_t record_cap)
    : m_tables(tables), m_cap(record_cap), m_records(tables.size()) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
        m_records[i].resize(tables[i].lsre_count() + 1);
    }
}

void Verifier::reset(std::span<const std::uint8_t> packet) {
    m_packet = packet;
    for (auto [t, k] : m_touched) {
        m_records[t][k].clear();
    }
    m_touched.clear();
    m_matches.clear();
    m_stats = {};
}

std::vector<std::size_t>& Verifier::records(std::uint32_t table, std::uint32_t k) { return m_records[table][k]; }

void Verifier::emit(std::uint32_t rule, std::size_t end) { m_matches.push_back({rule, end}); }

void Verifier::on_event(const MatchEvent& ev) {
    const RuleTable& t = m_tables.at(ev.table);
    const std::size_t n = t.lsre_count();
    if (ev.k == 0 || ev.k > n || ev.pos_e >= m_packet.size() || ev.pos_s > ev.pos_e) {
        return;
    }
    ++m_stats.events;
    CheckCost cost;
    const LusReCheck& before = t.gaps[ev.k - 1];
    bool ok = false;
    ++m_stats.gap_checks;
    if (ev.k == 1) {
        ok = t.leading_anchor ? check_gap(before, m_packet, 0, ev.pos_s, &cost)
                              : check_unanchored_prefix(before, m_packet, ev.pos_s, &cost);
    } else {
        for (std::size_t prev : records(ev.table, ev.k - 1)) {
            if (prev >= ev.pos_s) {
                break;
            }
            if (check_gap(before, m_packet, prev + 1, ev.pos_s, &cost)) {
                ok = true;
                break;
            }
        }
    }
    if (ok && ev.k == n) {
        const LusReCheck& after = t.gaps[n];
        ++m_stats.gap_checks;
        if (t.trailing_anchor) {
            if (check_gap(after, m_packet, ev.pos_e + 1, m_packet.size(), &cost)) {
                emit(t.rule_id, m_packet.size() - 1);
            }
        } else {
            std::size_t end = 0;
            if (find_suffix_end(after, m_packet, ev.pos_e + 1, end, &cost)) {
                emit(t.rule_id, end);
            }
        }
    } else if (ok) {
        auto& rec = records(ev.table, ev.k);
        if (rec.empty()) {
            m_touched.emplace_back(ev.table, ev.k);
        }
        const LusReCheck& next = t.gaps[ev.k];
        bool earliest_dominates = next.kind == LusReKind::DotMN && next.max == Node::kInfinite;
        if (!rec.empty() && (rec.back() == ev.pos_e || earliest_dominates)) {
            // duplicate end, or a later record can only shrink the next gap
        } else if (rec.size() >= m_cap) {
            ++m_stats.saturated;
        } else {
            rec.push_back(ev.pos_e);
        }
    }
    m_stats.verify_bytes += cost.bytes;
    m_stats.escalated = m_stats.escalated || cost.escalated;
}

std::vector<RuleMatch> Verifier::take_matches() {
    std::sort(m_matches.begin(), m_matches.end());
    m_matches.erase(std::unique(m_matches.begin(), m_matches.end()), m_matches.end());
    return std::move(m_matches);
}

}  // namespace xav
