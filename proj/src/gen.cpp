#include "xav/gen.hpp"

#include <algorithm>

#include "xav/oracle.hpp"

namespace xav {

namespace {

constexpr std::string_view kLetters = "abcdxy";
constexpr std::string_view kPacketAlphabet = "abcdxy01 \n";

std::uint8_t pick_byte(const CharClass& cls, Rng& rng) {
    if (rng.chance(3, 4)) {
        std::string local;
        for (char c : kPacketAlphabet) {
            if (cls.contains(static_cast<std::uint8_t>(c))) {
                local.push_back(c);
            }
        }
        if (!local.empty()) {
            return static_cast<std::uint8_t>(local[rng.uniform(local.size())]);
        }
    }
    auto n = rng.uniform(cls.population());
    for (unsigned b = 0; b < 256; ++b) {
        if (cls.contains(static_cast<std::uint8_t>(b)) && n-- == 0) {
            return static_cast<std::uint8_t>(b);
        }
    }
    return cls.first();
}

void sample_into(const Node& node, Rng& rng, std::uint32_t spread, std::string& out) {
    switch (node.kind) {
        case NodeKind::Class:
            out.push_back(static_cast<char>(pick_byte(node.cls, rng)));
            break;
        case NodeKind::Concat:
            for (const Node& c : node.children) {
                sample_into(c, rng, spread, out);
            }
            break;
        case NodeKind::Alt:
            sample_into(node.children[rng.uniform(node.children.size())], rng, spread, out);
            break;
        case NodeKind::Repeat: {
            std::uint32_t hi = node.max == Node::kInfinite ? node.min + spread : std::min(node.max, node.min + spread);
            auto n = static_cast<std::uint32_t>(rng.range(node.min, hi));
            for (std::uint32_t i = 0; i < n; ++i) {
                sample_into(node.child(), rng, spread, out);
            }
            break;
        }
    }
}

std::string literal(Rng& rng, std::size_t lo, std::size_t hi) {
    std::string s;
    auto n = rng.range(lo, hi);
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back(kLetters[rng.uniform(kLetters.size())]);
    }
    return s;
}

std::string short_piece(Rng& rng) {
    switch (rng.uniform(11)) {
        case 0: return "[ab]";
        case 1: return "[0-9]";
        case 2: return "\\d{1,3}";
        case 3: return "(" + literal(rng, 1, 2) + "|" + literal(rng, 1, 2) + ")";
        case 4: return std::string(1, kLetters[rng.uniform(kLetters.size())]) + "?";
        case 5: return std::string(1, kLetters[rng.uniform(kLetters.size())]) + "{2}";
        case 6: return ".{1,3}";
        case 7: return "[^a]{0,2}";
        case 8: return "\\s";
        case 9: return "[a-d]+";
        default: return literal(rng, 1, 1);
    }
}

std::string long_piece(Rng& rng) {
    switch (rng.uniform(7)) {
        case 0:
        case 1: return ".*";
        case 2: return "[^\\n]*";
        case 3: return "[^\\n]{" + std::to_string(rng.range(51, 60)) + "}";
        case 4: return "[^x]+";
        case 5: return ".{" + std::to_string(rng.range(51, 55)) + ",}";
        default: return "\\D*";
    }
}

std::string friendly_lsre(Rng& rng) {
    if (rng.chance(1, 8)) {
        return "(" + literal(rng, 3, 4) + "|" + literal(rng, 3, 4) + ")";
    }
    std::string s;
    if (rng.chance(1, 3)) {
        s += short_piece(rng);
    }
    s += literal(rng, 2, 4);
    for (auto n = rng.uniform(3); n > 0; --n) {
        s += rng.chance(1, 2) ? short_piece(rng) : literal(rng, 1, 2);
    }
    return s;
}

}  // namespace

std::uint64_t Rng::uniform(std::uint64_t n) {
    // rejection keeps the reduction unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = 0;
    do {
        v = m_engine();
    } while (v >= limit);
    return v % n;
}

std::string dotstar_token(std::size_t i) {
    return {static_cast<char>('a' + (i / 26) % 26), static_cast<char>('a' + i % 26)};
}

std::vector<std::string> dotstar_family(std::size_t k) {
    std::vector<std::string> rules;
    for (std::size_t i = 0; i < k; ++i) {
        rules.push_back(dotstar_token(2 * i) + ".*" + dotstar_token(2 * i + 1));
    }
    return rules;
}

std::vector<std::string> figure3_rules() {
    return {"user=[a-f0-9]{32}", "AUTH\\s[^\\n]{100}", "PARTIAL.*\\x20\\d.*BODY", "\\d{1,6}\\x00mic\\x7c"};
}

std::vector<Packet> random_traffic(std::uint64_t bytes, std::uint64_t seed, std::size_t packet_size) {
    Rng rng(seed);
    std::vector<Packet> out;
    while (bytes > 0) {
        auto n = static_cast<std::size_t>(std::min<std::uint64_t>(bytes, packet_size));
        Packet p(n);
        for (std::size_t i = 0; i < n; i += 8) {
            std::uint64_t v = rng.next();
            for (std::size_t j = i; j < std::min(n, i + 8); ++j) {
                p[j] = static_cast<std::uint8_t>(v);
                v >>= 8;
            }
        }
        out.push_back(std::move(p));
        bytes -= n;
    }
    return out;
}

std::vector<Packet> text_traffic(std::uint64_t bytes, std::uint64_t seed, std::size_t packet_size) {
    static const std::vector<std::string> words{
        "GET", "POST", "HTTP/1.1", "Host:", "user=", "admin", "AUTH", "LOGIN", "BODY", "PARTIAL", "Content-Length:",
        "the", "session", "id", "token", "mail", "from", "to", "subject", "200", "404", "OK", "index.html", "data"};
    Rng rng(seed);
    std::vector<Packet> out;
    while (bytes > 0) {
        auto n = static_cast<std::size_t>(std::min<std::uint64_t>(bytes, packet_size));
        Packet p;
        while (p.size() < n) {
            const std::string& w = words[rng.uniform(words.size())];
            p.insert(p.end(), w.begin(), w.end());
            p.push_back(rng.chance(1, 8) ? '\n' : ' ');
        }
        p.resize(n);
        out.push_back(std::move(p));
        bytes -= n;
    }
    return out;
}

std::string sample_match(const Node& node, Rng& rng, std::uint32_t spread) {
    std::string out;
    sample_into(node, rng, spread, out);
    return out;
}

std::string random_rule(Rng& rng) {
    std::string r;
    const bool leading = rng.chance(1, 10);
    if (leading) {
        r += "^";
    }
    if (!leading && rng.chance(1, 8)) {
        // unfriendly head, merged into the first lusRE
        r += "[a-d]{2}" + long_piece(rng);
    } else if (!leading && rng.chance(1, 8)) {
        r += long_piece(rng);
    }
    r += friendly_lsre(rng);
    for (auto n = rng.uniform(3); n > 0; --n) {
        r += long_piece(rng);
        if (rng.chance(1, 6)) {
            r += "[ab].*";
        }
        r += friendly_lsre(rng);
    }
    if (rng.chance(1, 5)) {
        r += long_piece(rng);
        if (rng.chance(1, 2)) {
            r += short_piece(rng);
        }
    }
    if (rng.chance(1, 10)) {
        r += "$";
    }
    return r;
}

DiffCase random_diff_case(Rng& rng, std::size_t rules, std::size_t packets) {
    DiffCase c;
    std::vector<RegexRule> parsed;
    while (c.rules.size() < rules) {
        std::string r = random_rule(rng);
        try {
            parsed.push_back(parse_regex(r));
            c.rules.push_back(std::move(r));
        } catch (const ParseError&) {
        }
    }
    for (std::size_t i = 0; i < packets; ++i) {
        std::string filler;
        auto len = rng.range(0, 120);
        for (std::size_t j = 0; j < len; ++j) {
            filler.push_back(rng.chance(1, 20) ? static_cast<char>(rng.uniform(256))
                                               : kPacketAlphabet[rng.uniform(kPacketAlphabet.size())]);
        }
        for (auto n = rng.uniform(3); n > 0; --n) {
            const RegexRule& rule = parsed[rng.uniform(parsed.size())];
            std::string m = sample_match(rule.tree.root, rng);
            if (!m.empty() && rng.chance(1, 4)) {
                m[rng.uniform(m.size())] = kPacketAlphabet[rng.uniform(kPacketAlphabet.size())];
            }
            std::size_t at = 0;
            switch (rng.uniform(4)) {
                case 0: at = 0; break;
                case 1: at = filler.size(); break;
                default: at = rng.uniform(filler.size() + 1); break;
            }
            filler.insert(at, m);
        }
        if (filler.empty()) {
            filler.push_back(kPacketAlphabet[rng.uniform(kPacketAlphabet.size())]);
        }
        c.packets.emplace_back(filler.begin(), filler.end());
    }
    return c;
}

DiffSummary& DiffSummary::operator+=(const DiffSummary& o) {
    rules += o.rules;
    unsupported += o.unsupported;
    pairs += o.pairs;
    oracle_matches += o.oracle_matches;
    disagreements += o.disagreements;
    saturated += o.saturated;
    for (const auto& e : o.examples) {
        if (examples.size() < 16) {
            examples.push_back(e);
        }
    }
    return *this;
}

DiffSummary differential(const std::vector<std::string>& rules, const std::vector<Packet>& packets,
                         const CompileConfig& config) {
    CompileResult built = compile(rules, config);
    const Database& db = built.db;
    DiffSummary s;
    s.rules = rules.size();
    std::vector<std::uint32_t> ids;
    std::vector<Oracle> oracles;
    for (const RuleInfo& r : db.rules) {
        if (!r.supported) {
            ++s.unsupported;
            continue;
        }
        ids.push_back(r.id);
        oracles.emplace_back(parse_regex(r.pattern, r.id));
    }
    ScanContext ctx(db);
    ScanStats stats;
    std::vector<char> hit(rules.size());
    for (std::size_t p = 0; p < packets.size(); ++p) {
        std::fill(hit.begin(), hit.end(), 0);
        for (const RuleMatch& m : ctx.scan(packets[p], stats)) {
            hit[m.rule] = 1;
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            bool expected = oracles[i].match(packets[p]).matched();
            bool got = hit[ids[i]] != 0;
            ++s.pairs;
            s.oracle_matches += expected ? 1 : 0;
            if (expected != got) {
                ++s.disagreements;
                if (s.examples.size() < 16) {
                    s.examples.push_back({p, ids[i], got, expected});
                }
            }
        }
    }
    s.saturated = stats.saturated_records;
    return s;
}

}  // namespace xav
