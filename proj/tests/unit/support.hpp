#pragma once

// Test-only reference matcher: position-set semantics straight from the tree,
// with no automata involved.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xav/regex.hpp"

namespace xavtest {

inline std::set<std::size_t> ends_from(const xav::Node& n, std::string_view s, const std::set<std::size_t>& from) {
    using xav::NodeKind;
    std::set<std::size_t> out;
    switch (n.kind) {
        case NodeKind::Class:
            for (std::size_t p : from) {
                if (p < s.size() && n.cls.contains(static_cast<std::uint8_t>(s[p]))) {
                    out.insert(p + 1);
                }
            }
            return out;
        case NodeKind::Concat: {
            std::set<std::size_t> cur = from;
            for (const auto& c : n.children) {
                cur = ends_from(c, s, cur);
            }
            return cur;
        }
        case NodeKind::Alt:
            for (const auto& c : n.children) {
                auto e = ends_from(c, s, from);
                out.insert(e.begin(), e.end());
            }
            return out;
        case NodeKind::Repeat: {
            std::set<std::size_t> cur = from;
            std::uint32_t i = 0;
            for (; i < n.min; ++i) {
                cur = ends_from(n.children[0], s, cur);
                if (cur.empty()) {
                    return cur;
                }
            }
            out = cur;
            while (n.max == xav::Node::kInfinite || i < n.max) {
                auto next = ends_from(n.children[0], s, cur);
                std::set<std::size_t> fresh;
                for (std::size_t p : next) {
                    if (out.insert(p).second) {
                        fresh.insert(p);
                    }
                }
                ++i;
                if (n.max == xav::Node::kInfinite) {
                    if (fresh.empty()) {
                        break;
                    }
                    cur = fresh;
                } else {
                    cur = next;
                    if (cur.empty()) {
                        break;
                    }
                }
            }
            return out;
        }
    }
    return out;
}

inline bool full_match(const xav::Node& n, std::string_view s) {
    return ends_from(n, s, {0}).count(s.size()) > 0;
}

/// All strings over alphabet with length <= max_len, shortest first.
inline std::vector<std::string> all_strings(std::string_view alphabet, std::size_t max_len) {
    std::vector<std::string> out{""};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (char c : alphabet) {
                out.push_back(out[i] + c);
            }
        }
        begin = end;
    }
    return out;
}

inline xav::ComponentTree ptree(std::string_view p) { return xav::parse_regex(p).tree; }

inline std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

}  // namespace xavtest
