#include "xav/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace xav {

namespace {

constexpr std::size_t kUnrollItems = 64;
constexpr std::uint32_t kSupportedLengths[] = {8, 4, 2};

using u128 = unsigned __int128;

std::uint64_t sat_product(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

// Flat item sequence of a concatenation. Classes (including unrolled fixed
// repetitions) are the only items a window may cover; everything else is opaque.
void flatten(const Node& node, std::vector<Node>& out) {
    switch (node.kind) {
        case NodeKind::Class:
            out.push_back(node);
            return;
        case NodeKind::Concat:
            for (const Node& c : node.children) {
                flatten(c, out);
            }
            return;
        case NodeKind::Repeat: {
            if (node.min == 0) {
                out.push_back(node);
                return;
            }
            std::vector<Node> once;
            flatten(node.child(), once);
            std::size_t per_copy = std::max<std::size_t>(1, once.size());
            std::uint32_t copies = static_cast<std::uint32_t>(
                std::min<std::size_t>(node.min, std::max<std::size_t>(1, kUnrollItems / per_copy)));
            for (std::uint32_t i = 0; i < copies; ++i) {
                out.insert(out.end(), once.begin(), once.end());
            }
            std::uint32_t rest_min = node.min - copies;
            std::uint32_t rest_max = node.max == Node::kInfinite ? Node::kInfinite : node.max - copies;
            if (rest_max > 0) {
                out.push_back(normalize(Node::make_repeat(node.child(), rest_min, rest_max)));
            }
            return;
        }
        case NodeKind::Alt:
            out.push_back(node);
            return;
    }
}

// All item sequences obtained by distributing concatenation over alternation.
std::optional<std::vector<std::vector<Node>>> expand(const Node& node, std::size_t cap) {
    switch (node.kind) {
        case NodeKind::Class:
        case NodeKind::Repeat: {
            std::vector<Node> items;
            flatten(node, items);
            return std::vector<std::vector<Node>>{std::move(items)};
        }
        case NodeKind::Alt: {
            std::vector<std::vector<Node>> out;
            for (const Node& c : node.children) {
                auto sub = expand(c, cap);
                if (!sub || out.size() + sub->size() > cap) {
                    return std::nullopt;
                }
                for (auto& s : *sub) {
                    out.push_back(std::move(s));
                }
            }
            return out;
        }
        case NodeKind::Concat: {
            std::vector<std::vector<Node>> out(1);
            for (const Node& c : node.children) {
                auto sub = expand(c, cap);
                if (!sub || out.size() * sub->size() > cap) {
                    return std::nullopt;
                }
                std::vector<std::vector<Node>> next;
                next.reserve(out.size() * sub->size());
                for (const auto& prefix : out) {
                    for (const auto& s : *sub) {
                        auto combined = prefix;
                        combined.insert(combined.end(), s.begin(), s.end());
                        next.push_back(std::move(combined));
                    }
                }
                out = std::move(next);
            }
            return out;
        }
    }
    return std::nullopt;
}

struct Window {
    std::size_t start = 0;
    std::size_t length = 0;
    std::uint64_t expansion = 1;
};

// a.p < b.p, with p = expansion / 256^length compared exactly.
int compare_probability(const Window& a, const Window& b) {
    u128 lhs = static_cast<u128>(a.expansion) << (8 * b.length);
    u128 rhs = static_cast<u128>(b.expansion) << (8 * a.length);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

std::uint64_t window_expansion(const std::vector<Node>& items, std::size_t start, std::size_t len) {
    std::uint64_t e = 1;
    for (std::size_t i = start; i < start + len; ++i) {
        e = sat_product(e, items[i].cls.population());
    }
    return e;
}

bool window_is_classes(const std::vector<Node>& items, std::size_t start, std::size_t len) {
    for (std::size_t i = start; i < start + len; ++i) {
        if (items[i].kind != NodeKind::Class) {
            return false;
        }
    }
    return true;
}

LdRE window_ldre(const std::vector<Node>& items, const Window& w) {
    LdRE out;
    for (std::size_t i = w.start; i < w.start + w.length; ++i) {
        out.classes.push_back(items[i].cls);
    }
    return out;
}

// Runs over the same class (single items or counted repetitions) are fused.
Node compact(const std::vector<Node>& items, std::size_t begin, std::size_t end) {
    auto run_class = [](const Node& n) -> const CharClass* {
        if (n.kind == NodeKind::Class) return &n.cls;
        if (n.kind == NodeKind::Repeat && n.child().kind == NodeKind::Class) return &n.child().cls;
        return nullptr;
    };
    std::vector<Node> out;
    std::size_t i = begin;
    while (i < end) {
        const CharClass* c = run_class(items[i]);
        if (c == nullptr) {
            out.push_back(items[i]);
            ++i;
            continue;
        }
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        std::size_t j = i;
        for (; j < end; ++j) {
            const CharClass* d = run_class(items[j]);
            if (d == nullptr || !(*d == *c)) {
                break;
            }
            bool single = items[j].kind == NodeKind::Class;
            lo += single ? 1 : items[j].min;
            if (hi != Node::kInfinite) {
                std::uint32_t mx = single ? 1 : items[j].max;
                hi = mx == Node::kInfinite ? Node::kInfinite : std::min<std::uint64_t>(hi + mx, Node::kInfinite - 1);
            }
        }
        if (j == i + 1) {
            out.push_back(items[i]);
        } else {
            out.push_back(Node::make_repeat(Node::make_class(*c), static_cast<std::uint32_t>(std::min<std::uint64_t>(lo, Node::kInfinite - 1)),
                                            static_cast<std::uint32_t>(hi)));
        }
        i = j;
    }
    std::vector<Node> normalized;
    for (Node& n : out) {
        normalized.push_back(normalize(std::move(n)));
    }
    return normalize(Node::make_concat(std::move(normalized)));
}

struct Choice {
    LdRE natural;
    LdRE trimmed;
    Window window;  // trimmed window within the item sequence
    double probability = 1.0;
};

// Best friendly window of one item sequence, if any.
std::optional<Choice> choose_window(const std::vector<Node>& items, const CompileConfig& config,
                                    double& best_seen) {
    std::vector<Window> natural;
    std::size_t max_len = std::min<std::size_t>(config.max_ldre_length, 8);
    for (std::size_t len = 2; len <= max_len; ++len) {
        for (std::size_t s = 0; s + len <= items.size(); ++s) {
            if (!window_is_classes(items, s, len)) {
                continue;
            }
            std::uint64_t e = window_expansion(items, s, len);
            if (e > config.max_expansion) {
                best_seen = std::min(best_seen, window_ldre(items, {s, len, e}).probability());
                continue;
            }
            natural.push_back({s, len, e});
        }
    }
    // Lowest probability, then longer, then leftmost.
    std::sort(natural.begin(), natural.end(), [](const Window& a, const Window& b) {
        int c = compare_probability(a, b);
        if (c != 0) return c < 0;
        if (a.length != b.length) return a.length > b.length;
        return a.start < b.start;
    });

    for (const Window& w : natural) {
        std::size_t target = 0;
        for (std::uint32_t len : kSupportedLengths) {
            if (len <= w.length && len <= max_len) {
                target = len;
                break;
            }
        }
        if (target == 0) {
            continue;
        }
        Window best{w.start, target, window_expansion(items, w.start, target)};
        // Slide across the natural window; on ties keep the rightmost so the
        // front part keeps its natural end.
        for (std::size_t s = w.start + 1; s + target <= w.start + w.length; ++s) {
            Window cand{s, target, window_expansion(items, s, target)};
            if (compare_probability(cand, best) <= 0) {
                best = cand;
            }
        }
        LdRE trimmed = window_ldre(items, best);
        double p = trimmed.probability();
        best_seen = std::min(best_seen, p);
        if (p < config.probability_threshold) {
            return Choice{window_ldre(items, w), std::move(trimmed), best, p};
        }
    }
    return std::nullopt;
}

LsReSplit make_split(const std::vector<Node>& items, const Choice& choice, std::uint32_t fragment_index) {
    LsReSplit split;
    split.fragment = fragment_index;
    split.natural = choice.natural;
    split.ldre = choice.trimmed;
    std::size_t end = choice.window.start + choice.window.length;
    split.front = compact(items, 0, end);
    split.back = compact(items, end, items.size());
    return split;
}

Fragment make_fragment(FragmentKind kind, std::vector<Node> run) {
    Fragment f;
    f.kind = kind;
    f.tree = normalize(Node::make_concat(std::move(run)));
    return f;
}

void reindex(DecomposedRule& rule) {
    for (std::size_t i = 0; i < rule.fragments.size(); ++i) {
        rule.fragments[i].index = static_cast<std::uint32_t>(i);
    }
}

}  // namespace

double LdRE::probability() const {
    double p = 1.0;
    for (const CharClass& c : classes) {
        p *= c.probability();
    }
    return p;
}

std::uint64_t LdRE::expansion() const {
    std::uint64_t e = 1;
    for (const CharClass& c : classes) {
        e = sat_product(e, c.population());
    }
    return e;
}

std::string LdRE::to_pattern() const {
    std::vector<Node> items;
    for (const CharClass& c : classes) {
        items.push_back(Node::make_class(c));
    }
    return xav::to_pattern(normalize(Node::make_concat(std::move(items))));
}

std::vector<std::string> LdRE::expand() const {
    std::vector<std::string> out{std::string()};
    for (const CharClass& c : classes) {
        std::vector<std::string> next;
        next.reserve(out.size() * c.population());
        for (const std::string& prefix : out) {
            for (unsigned b = 0; b < 256; ++b) {
                if (c.contains(static_cast<std::uint8_t>(b))) {
                    next.push_back(prefix + static_cast<char>(b));
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

bool is_long_component(const Node& node, const CompileConfig& config) {
    if (node.kind != NodeKind::Repeat || node.child().kind != NodeKind::Class) {
        return false;
    }
    if (node.child().cls.population() <= config.long_population) {
        return false;
    }
    return node.max == Node::kInfinite || node.max > config.long_count;
}

bool contains_long_component(const Node& node, const CompileConfig& config) {
    if (is_long_component(node, config)) {
        return true;
    }
    return std::any_of(node.children.begin(), node.children.end(),
                       [&](const Node& c) { return contains_long_component(c, config); });
}

DecomposedRule split_rule(const RegexRule& rule, const CompileConfig& config) {
    const Node& root = rule.tree.root;
    std::vector<Node> items;
    if (root.kind == NodeKind::Concat) {
        items = root.children;
    } else {
        items.push_back(root);
    }

    DecomposedRule out;
    out.rule_id = rule.id;
    out.leading_anchor = rule.tree.leading_anchor;
    out.trailing_anchor = rule.tree.trailing_anchor;

    std::vector<Node> ls_run;
    std::vector<Node> lus_run;
    for (const Node& item : items) {
        if (is_long_component(item, config)) {
            if (!ls_run.empty()) {
                out.fragments.push_back(make_fragment(FragmentKind::LsRE, std::move(ls_run)));
                ls_run.clear();
            }
            lus_run.push_back(item);
            continue;
        }
        if (contains_long_component(item, config)) {
            throw UnsupportedRule("unsupported: nested long component");
        }
        if (ls_run.empty()) {
            // A new lsRE starts: close the lusRE in front of it (possibly empty).
            out.fragments.push_back(make_fragment(FragmentKind::LusRE, std::move(lus_run)));
            lus_run.clear();
        }
        ls_run.push_back(item);
    }
    if (!ls_run.empty()) {
        out.fragments.push_back(make_fragment(FragmentKind::LsRE, std::move(ls_run)));
    }
    out.fragments.push_back(make_fragment(FragmentKind::LusRE, std::move(lus_run)));
    if (out.lsre_count() == 0) {
        throw UnsupportedRule("unsupported: no filterable fragment");
    }
    reindex(out);
    return out;
}

LdreExtraction extract_ldre(const Fragment& lsre, const CompileConfig& config) {
    LdreExtraction result;
    std::vector<Node> items;
    flatten(lsre.tree, items);
    if (auto choice = choose_window(items, config, result.best_probability)) {
        result.friendly = true;
        result.splits.push_back(make_split(items, *choice, lsre.index));
        return result;
    }

    auto alternatives = expand(lsre.tree, config.max_alternatives);
    if (!alternatives || alternatives->size() < 2) {
        result.reason = alternatives ? "no window below the probability threshold"
                                     : "too many alternatives to distribute";
        return result;
    }
    std::vector<LsReSplit> splits;
    for (const auto& alt : *alternatives) {
        double seen = 1.0;
        auto choice = choose_window(alt, config, seen);
        if (!choice) {
            result.reason = "an alternative has no window below the probability threshold";
            return result;
        }
        splits.push_back(make_split(alt, *choice, lsre.index));
    }
    result.friendly = true;
    result.best_probability = 0.0;
    for (const auto& s : splits) {
        result.best_probability = std::max(result.best_probability, s.ldre.probability());
    }
    result.splits = std::move(splits);
    return result;
}

DecomposedRule merge_unfriendly(const DecomposedRule& rule) {
    DecomposedRule out;
    out.rule_id = rule.rule_id;
    out.leading_anchor = rule.leading_anchor;
    out.trailing_anchor = rule.trailing_anchor;
    out.fragments.push_back(rule.fragments.front());
    std::size_t n = rule.lsre_count();
    for (std::size_t k = 1; k <= n; ++k) {
        const Fragment& s = rule.lsre(k);
        const Fragment& next = rule.lusre(k + 1);
        if (s.unfriendly) {
            Fragment& prev = out.fragments.back();
            prev.tree = normalize(Node::make_concat({prev.tree, s.tree, next.tree}));
            prev.merged = true;
            continue;
        }
        out.fragments.push_back(s);
        out.fragments.push_back(next);
    }
    if (out.lsre_count() == 0) {
        throw UnsupportedRule("unsupported: no filterable fragment");
    }
    reindex(out);
    return out;
}

Decomposition decompose(const RegexRule& rule, const CompileConfig& config) {
    Decomposition out;
    DecomposedRule split = split_rule(rule, config);
    std::size_t n = split.lsre_count();
    std::vector<std::vector<LsReSplit>> per_lsre(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
        Fragment& s = split.fragments[2 * k - 1];
        LdreExtraction ex = extract_ldre(s, config);
        std::ostringstream note;
        note << "S" << k << " " << to_pattern(s.tree) << ": ";
        if (!ex.friendly) {
            s.unfriendly = true;
            note << "unfriendly (" << ex.reason << ", best p=" << ex.best_probability << ")";
        } else {
            for (std::size_t i = 0; i < ex.splits.size(); ++i) {
                const LsReSplit& sp = ex.splits[i];
                note << (i ? "; " : "") << "ldRE " << sp.natural.to_pattern() << " -> " << sp.ldre.to_pattern()
                     << " p=" << sp.ldre.probability();
            }
            per_lsre[k] = std::move(ex.splits);
        }
        out.notes.push_back(note.str());
    }
    out.rule = merge_unfriendly(split);

    std::uint32_t next_index = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (split.lsre(k).unfriendly) {
            continue;
        }
        ++next_index;
        for (LsReSplit& sp : per_lsre[k]) {
            sp.rule_id = rule.id;
            sp.fragment = next_index;
            out.splits.push_back(std::move(sp));
        }
    }
    return out;
}

Node recompose(const DecomposedRule& rule) {
    std::vector<Node> parts;
    for (const Fragment& f : rule.fragments) {
        parts.push_back(f.tree);
    }
    return normalize(Node::make_concat(std::move(parts)));
}

}  // namespace xav
