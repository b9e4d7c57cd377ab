#include "xav/oracle.hpp"

namespace xav {

Oracle::Oracle(const RegexRule& rule)
    : m_rule_id(rule.id), m_leading(rule.tree.leading_anchor), m_trailing(rule.tree.trailing_anchor) {
    auto [in, out] = build(rule.tree.root);
    m_start = in;
    m_accept = out;
}

std::uint32_t Oracle::add() {
    m_states.emplace_back();
    return static_cast<std::uint32_t>(m_states.size() - 1);
}

std::pair<std::uint32_t, std::uint32_t> Oracle::build(const Node& n) {
    switch (n.kind) {
        case NodeKind::Class: {
            std::uint32_t a = add();
            std::uint32_t b = add();
            m_states[a].cls = n.cls;
            m_states[a].consumes = true;
            m_states[a].next = b;
            return {a, b};
        }
        case NodeKind::Concat: {
            std::uint32_t a = add();
            std::uint32_t cur = a;
            for (const Node& c : n.children) {
                auto [i, o] = build(c);
                m_states[cur].eps.push_back(i);
                cur = o;
            }
            return {a, cur};
        }
        case NodeKind::Alt: {
            std::uint32_t a = add();
            std::uint32_t b = add();
            for (const Node& c : n.children) {
                auto [i, o] = build(c);
                m_states[a].eps.push_back(i);
                m_states[o].eps.push_back(b);
            }
            return {a, b};
        }
        case NodeKind::Repeat: {
            std::uint32_t a = add();
            std::uint32_t b = add();
            std::uint32_t cur = a;
            for (std::uint32_t i = 0; i < n.min; ++i) {
                auto [ci, co] = build(n.children[0]);
                m_states[cur].eps.push_back(ci);
                cur = co;
            }
            if (n.max == Node::kInfinite) {
                auto [ci, co] = build(n.children[0]);
                m_states[cur].eps.push_back(ci);
                m_states[co].eps.push_back(cur);
                m_states[cur].eps.push_back(b);
            } else {
                for (std::uint32_t i = n.min; i < n.max; ++i) {
                    m_states[cur].eps.push_back(b);
                    auto [ci, co] = build(n.children[0]);
                    m_states[cur].eps.push_back(ci);
                    cur = co;
                }
                m_states[cur].eps.push_back(b);
            }
            return {a, b};
        }
    }
    return {add(), add()};
}

void Oracle::close(std::vector<std::uint32_t>& set, std::vector<char>& mark) const {
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::uint32_t e : m_states[set[i]].eps) {
            if (!mark[e]) {
                mark[e] = 1;
                set.push_back(e);
            }
        }
    }
}

OracleResult Oracle::match(std::span<const std::uint8_t> data) const {
    OracleResult r;
    r.rule_id = m_rule_id;
    const std::size_t n = m_states.size();
    std::vector<std::uint32_t> cur;
    std::vector<std::uint32_t> nxt;
    std::vector<char> mark(n, 0);

    auto seed = [&](std::vector<std::uint32_t>& set) {
        if (!mark[m_start]) {
            mark[m_start] = 1;
            set.push_back(m_start);
        }
    };
    auto empty_here = [&](std::size_t pos) {
        // empty match at pos: the start closure alone contains the accept state
        std::vector<std::uint32_t> s{m_start};
        std::vector<char> m(n, 0);
        m[m_start] = 1;
        close(s, m);
        if (m[m_accept] && (!m_trailing || pos == data.size())) {
            r.empty_match = true;
        }
    };

    empty_here(0);
    if (!m_leading && m_trailing) {
        empty_here(data.size());
    }

    seed(cur);
    close(cur, mark);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::uint32_t q : cur) {
            mark[q] = 0;
        }
        nxt.clear();
        for (std::uint32_t q : cur) {
            const State& s = m_states[q];
            if (s.consumes && s.cls.contains(data[i]) && !mark[s.next]) {
                mark[s.next] = 1;
                nxt.push_back(s.next);
            }
        }
        close(nxt, mark);
        if (mark[m_accept] && (!m_trailing || i + 1 == data.size())) {
            r.ends.push_back(i);
        }
        if (!m_leading) {
            seed(nxt);
            close(nxt, mark);
        }
        std::swap(cur, nxt);
        if (cur.empty()) {
            break;
        }
    }
    return r;
}

OracleResult oracle_match(const RegexRule& rule, std::span<const std::uint8_t> data) {
    return Oracle(rule).match(data);
}

}  // namespace xav
