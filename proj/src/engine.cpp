#include "xav/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace xav {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_config(const CompileConfig& c, ByteWriter& out) {
    out.f64(c.probability_threshold);
    out.u32(c.max_ldre_length);
    out.u32(c.long_population);
    out.u32(c.long_count);
    out.u64(c.max_expansion);
    out.u32(c.fingerprint_bits);
    out.u64(c.nfa_state_cap);
    out.u64(c.dfa_state_cap);
    out.u32(c.record_cap);
    out.u64(c.max_alternatives);
}

CompileConfig read_config(ByteReader& in) {
    CompileConfig c;
    c.probability_threshold = in.f64();
    c.max_ldre_length = in.u32();
    c.long_population = in.u32();
    c.long_count = in.u32();
    c.max_expansion = in.u64();
    c.fingerprint_bits = in.u32();
    c.nfa_state_cap = static_cast<std::size_t>(in.u64());
    c.dfa_state_cap = static_cast<std::size_t>(in.u64());
    c.record_cap = in.u32();
    c.max_alternatives = static_cast<std::size_t>(in.u64());
    return c;
}

double ratio(std::uint64_t a, std::uint64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

std::string fixed(double v) {
    std::ostringstream os;
    os << std::setprecision(9) << v;
    return os.str();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

CompileResult compile(const std::vector<std::string>& patterns, const CompileConfig& config) {
    CompileResult out;
    Database& db = out.db;
    CompileReport& report = out.report;
    db.config = config;
    report.rules = patterns.size();

    std::vector<LsReSplit> splits;
    std::vector<std::uint32_t> split_table;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        RuleInfo info;
        info.id = static_cast<std::uint32_t>(i);
        info.pattern = patterns[i];
        info.digest = fnv1a64(patterns[i]);
        auto t0 = Clock::now();
        try {
            RegexRule rule = parse_regex(patterns[i], info.id);
            Decomposition d = decompose(rule, config);
            report.timings.decompose_ms += ms_since(t0);
            auto t1 = Clock::now();
            RuleTable table = build_rule_table(d.rule, config);
            report.timings.verifier_ms += ms_since(t1);
            auto table_index = static_cast<std::uint32_t>(db.tables.size());
            db.tables.push_back(std::move(table));
            for (auto& s : d.splits) {
                splits.push_back(std::move(s));
                split_table.push_back(table_index);
            }
            for (auto& n : d.notes) {
                report.notes.push_back("rule " + std::to_string(i) + ": " + n);
            }
            info.supported = true;
        } catch (const ParseError& e) {
            report.timings.decompose_ms += ms_since(t0);
            info.reason = std::string("parse error: ") + e.what();
        } catch (const UnsupportedRule& e) {
            report.timings.decompose_ms += ms_since(t0);
            info.reason = std::string("unsupported: ") + e.what();
        }
        if (!info.supported) {
            report.notes.push_back("rule " + std::to_string(i) + " skipped (" + info.reason + ")");
        }
        db.rules.push_back(std::move(info));
    }
    report.supported = db.tables.size();
    if (db.tables.empty()) {
        throw CompileError("no rule survived parsing and decomposition");
    }

    for (std::size_t i = 0; i < splits.size(); ++i) {
        splits[i].lsre_id = static_cast<std::uint32_t>(i);
    }
    report.splits = splits.size();

    auto t_filter = Clock::now();
    try {
        FilterBuild fb = build_filter(splits, config);
        report.filter_keys = fb.keys2 + fb.keys4 + fb.keys8;
        db.filter = std::move(fb.bank);
    } catch (const FilterBuildError& e) {
        throw CompileError(e.what());
    }
    report.timings.filter_ms = ms_since(t_filter);

    auto t_dfa = Clock::now();
    try {
        db.reverse = CompressedStt(build_reverse_dfa(splits, config));
        ForwardDfa fwd = build_forward_dfa(splits, config);
        db.forward = CompressedStt(fwd.dfa);
        db.splits_of_back = fwd.splits_of_back;
        for (std::size_t i = 0; i < splits.size(); ++i) {
            SplitMeta m;
            m.lsre_id = splits[i].lsre_id;
            m.table = split_table[i];
            m.k = splits[i].fragment;
            m.back = fwd.back_of_split[i];
            m.ldre = splits[i].ldre.to_pattern();
            db.splits.push_back(std::move(m));
        }
    } catch (const StateExplosion& e) {
        throw CompileError(std::string("anchor DFA: ") + e.what());
    }
    report.timings.anchor_dfa_ms = ms_since(t_dfa);
    report.reverse_states = db.reverse.size();
    report.forward_states = db.forward.size();
    for (const auto& t : db.tables) {
        for (const auto& g : t.gaps) {
            report.lusdfa_states += g.exact.size() + g.reversed.size();
        }
    }
    return out;
}

std::size_t Database::memory_bytes() const {
    std::size_t n = filter.memory_bytes() + reverse.compressed_bytes() + forward.compressed_bytes();
    for (const auto& t : tables) {
        for (const auto& g : t.gaps) {
            n += g.exact.compressed_bytes() + g.reversed.compressed_bytes();
        }
    }
    return n;
}

std::vector<std::uint8_t> Database::serialize() const {
    ByteWriter out;
    out.magic("XAVD");
    out.u32(1);
    write_config(config, out);
    out.u64(rules.size());
    for (const auto& r : rules) {
        out.u32(r.id);
        out.str(r.pattern);
        out.u8(r.supported ? 1 : 0);
        out.str(r.reason);
        out.u64(r.digest);
    }
    out.u64(tables.size());
    for (const auto& t : tables) {
        serialize_rule_table(t, out);
    }
    out.u64(splits.size());
    for (const auto& s : splits) {
        out.u32(s.lsre_id);
        out.u32(s.table);
        out.u32(s.k);
        out.u32(static_cast<std::uint32_t>(s.back));
        out.str(s.ldre);
    }
    out.u64(splits_of_back.size());
    for (const auto& v : splits_of_back) {
        out.u64(v.size());
        for (std::uint32_t x : v) {
            out.u32(x);
        }
    }
    out.blob(filter.serialize());
    out.blob(reverse.serialize());
    out.blob(forward.serialize());
    return out.take();
}

Database Database::deserialize(std::span<const std::uint8_t> blob) {
    ByteReader in(blob);
    in.expect_magic("XAVD");
    if (in.u32() != 1) {
        throw FormatError("unsupported database version");
    }
    Database db;
    db.config = read_config(in);
    std::size_t n = in.count(21);
    for (std::size_t i = 0; i < n; ++i) {
        RuleInfo r;
        r.id = in.u32();
        r.pattern = in.str();
        r.supported = in.u8() != 0;
        r.reason = in.str();
        r.digest = in.u64();
        if (r.digest != fnv1a64(r.pattern)) {
            throw FormatError("rule digest mismatch");
        }
        db.rules.push_back(std::move(r));
    }
    n = in.count(14);
    for (std::size_t i = 0; i < n; ++i) {
        db.tables.push_back(deserialize_rule_table(in));
    }
    n = in.count(20);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMeta s;
        s.lsre_id = in.u32();
        s.table = in.u32();
        s.k = in.u32();
        s.back = static_cast<std::int32_t>(in.u32());
        s.ldre = in.str();
        if (s.table >= db.tables.size() || s.k == 0 || s.k > db.tables[s.table].lsre_count()) {
            throw FormatError("split refers to a missing rule fragment");
        }
        db.splits.push_back(std::move(s));
    }
    n = in.count(8);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = in.count(4);
        std::vector<std::uint32_t> v;
        for (std::size_t j = 0; j < m; ++j) {
            v.push_back(in.u32());
        }
        db.splits_of_back.push_back(std::move(v));
    }
    db.filter = FilterBank::deserialize(in.blob());
    db.reverse = CompressedStt::deserialize(in.blob());
    db.forward = CompressedStt::deserialize(in.blob());
    for (const auto& s : db.splits) {
        if (s.back >= 0 && static_cast<std::size_t>(s.back) >= db.forward.starts().size()) {
            throw FormatError("split refers to a missing forward entry");
        }
    }
    if (!in.done()) {
        throw FormatError("trailing bytes after database");
    }
    return db;
}

ScanStats& ScanStats::operator+=(const ScanStats& o) {
    packets += o.packets;
    bytes += o.bytes;
    filter_hits += o.filter_hits;
    adfa_transitions += o.adfa_transitions;
    reverse_threads += o.reverse_threads;
    forward_threads += o.forward_threads;
    reverse_accepts += o.reverse_accepts;
    events += o.events;
    escalated_packets += o.escalated_packets;
    verify_bytes += o.verify_bytes;
    saturated_records += o.saturated_records;
    return *this;
}

ScanContext::ScanContext(const Database& db) : m_db(db), m_verifier(db.tables, db.config.record_cap) {}

std::vector<RuleMatch> ScanContext::scan(std::span<const std::uint8_t> packet, ScanStats& stats) {
    ++stats.packets;
    stats.bytes += packet.size();
    m_verifier.reset(packet);
    m_hits.clear();
    m_db.filter.scan_each(packet, [&](std::size_t pos, FilterUnitKind) {
        if (m_hits.empty() || m_hits.back() != pos) {
            m_hits.push_back(pos);
        }
    });
    stats.filter_hits += m_hits.size();

    m_events.clear();
    const CompressedStt& rev = m_db.reverse;
    const CompressedStt& fwd = m_db.forward;
    std::vector<std::pair<std::int32_t, std::vector<std::size_t>>> forward_cache;
    for (std::size_t pos : m_hits) {
        m_starts.clear();
        stats.adfa_transitions += run_thread_each(rev, packet, pos, Direction::Reverse, rev.start(),
                                                  [&](const std::vector<std::uint32_t>& labels, std::size_t depth) {
                                                      for (std::uint32_t l : labels) {
                                                          m_starts.emplace_back(l, pos + 1 - depth);
                                                      }
                                                  });
        ++stats.reverse_threads;
        stats.reverse_accepts += m_starts.size();
        if (m_starts.empty()) {
            continue;
        }
        forward_cache.clear();
        for (auto [split, pos_s] : m_starts) {
            const SplitMeta& meta = m_db.splits[split];
            const std::vector<std::size_t>* ends = nullptr;
            if (meta.back < 0) {
                m_ends.assign(1, pos);
                ends = &m_ends;
            } else {
                for (const auto& [b, e] : forward_cache) {
                    if (b == meta.back) {
                        ends = &e;
                        break;
                    }
                }
                if (ends == nullptr) {
                    std::vector<std::size_t> found;
                    auto label = static_cast<std::uint32_t>(meta.back);
                    stats.adfa_transitions += run_thread_each(
                        fwd, packet, pos + 1, Direction::Forward, fwd.starts()[label],
                        [&](const std::vector<std::uint32_t>& labels, std::size_t depth) {
                            if (std::binary_search(labels.begin(), labels.end(), label)) {
                                found.push_back(pos + depth);
                            }
                        });
                    ++stats.forward_threads;
                    forward_cache.emplace_back(meta.back, std::move(found));
                    ends = &forward_cache.back().second;
                }
            }
            for (std::size_t e : *ends) {
                m_events.push_back({meta.table, meta.k, pos_s, e});
            }
        }
    }

    std::sort(m_events.begin(), m_events.end(), [](const MatchEvent& a, const MatchEvent& b) {
        if (a.pos_e != b.pos_e) return a.pos_e < b.pos_e;
        if (a.table != b.table) return a.table < b.table;
        if (a.k != b.k) return a.k < b.k;
        return a.pos_s < b.pos_s;
    });
    m_events.erase(std::unique(m_events.begin(), m_events.end()), m_events.end());
    for (const MatchEvent& ev : m_events) {
        m_verifier.on_event(ev);
    }
    const VerifyStats& vs = m_verifier.stats();
    stats.events += vs.events;
    stats.verify_bytes += vs.verify_bytes;
    stats.saturated_records += vs.saturated;
    stats.escalated_packets += vs.escalated ? 1 : 0;
    return m_verifier.take_matches();
}

std::vector<RuleMatch> scan_packet(const Database& db, std::span<const std::uint8_t> packet, ScanStats& stats) {
    ScanContext ctx(db);
    return ctx.scan(packet, stats);
}

ScanReport scan_corpus(const Database& db, const std::vector<Packet>& packets, unsigned workers) {
    ScanReport report;
    report.packets.resize(packets.size());
    workers = std::max(1u, workers);
    std::vector<ScanStats> per_worker(workers);
    std::atomic<std::size_t> next{0};
    auto work = [&](unsigned w) {
        ScanContext ctx(db);
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= packets.size()) {
                break;
            }
            report.packets[i].matches = ctx.scan(packets[i], per_worker[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& s : per_worker) {
        report.stats += s;
    }
    return report;
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "auto") return CorpusFormat::Auto;
    if (name == "raw") return CorpusFormat::Raw;
    if (name == "dir") return CorpusFormat::Directory;
    if (name == "container") return CorpusFormat::Container;
    throw std::invalid_argument("unknown corpus format: " + std::string(name));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    namespace fs = std::filesystem;
    if (format == CorpusFormat::Auto) {
        if (fs::is_directory(path)) {
            format = CorpusFormat::Directory;
        } else if (path.extension() == ".lpc") {
            format = CorpusFormat::Container;
        } else {
            format = CorpusFormat::Raw;
        }
    }
    Corpus c;
    switch (format) {
        case CorpusFormat::Raw:
            c.packets.push_back(read_file(path));
            break;
        case CorpusFormat::Directory: {
            if (!fs::is_directory(path)) {
                throw std::runtime_error("not a directory: " + path.string());
            }
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(path)) {
                if (e.is_regular_file()) {
                    files.push_back(e.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                try {
                    c.packets.push_back(read_file(f));
                } catch (const std::exception& e) {
                    c.partial = true;
                    c.error = e.what();
                    break;
                }
            }
            break;
        }
        case CorpusFormat::Container: {
            auto data = read_file(path);
            std::size_t i = 0;
            while (i < data.size()) {
                if (data.size() - i < 4) {
                    c.partial = true;
                    c.error = "truncated length prefix at byte " + std::to_string(i);
                    break;
                }
                std::uint32_t len = static_cast<std::uint32_t>(data[i]) | (static_cast<std::uint32_t>(data[i + 1]) << 8) |
                                    (static_cast<std::uint32_t>(data[i + 2]) << 16) |
                                    (static_cast<std::uint32_t>(data[i + 3]) << 24);
                i += 4;
                if (data.size() - i < len) {
                    c.partial = true;
                    c.error = "truncated packet at byte " + std::to_string(i);
                    break;
                }
                c.packets.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(i),
                                       data.begin() + static_cast<std::ptrdiff_t>(i + len));
                i += len;
            }
            break;
        }
        case CorpusFormat::Auto:
            break;
    }
    return c;
}

void write_container(const std::filesystem::path& path, const std::vector<Packet>& packets) {
    ByteWriter out;
    for (const auto& p : packets) {
        out.u32(static_cast<std::uint32_t>(p.size()));
        out.bytes(p);
    }
    write_file(path, out.data());
}

std::string report_json(const ScanReport& report) {
    const ScanStats& s = report.stats;
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["packets"] = s.packets;
    j["bytes"] = s.bytes;
    j["filter_hits"] = s.filter_hits;
    j["filter_hit_ratio"] = ratio(s.filter_hits, s.bytes);
    j["adfa_transitions"] = s.adfa_transitions;
    j["adfa_byte_ratio"] = ratio(s.adfa_transitions, s.bytes);
    j["escalated_packets"] = s.escalated_packets;
    j["escalated_ratio"] = ratio(s.escalated_packets, s.packets);
    j["verify_bytes"] = s.verify_bytes;
    j["verify_byte_ratio"] = ratio(s.verify_bytes, s.bytes);
    j["reverse_threads"] = s.reverse_threads;
    j["forward_threads"] = s.forward_threads;
    j["saturated_records"] = s.saturated_records;
    j["partial"] = report.partial;
    if (report.partial) {
        j["error"] = report.error;
    }
    nlohmann::json matches = nlohmann::json::array();
    for (std::size_t p = 0; p < report.packets.size(); ++p) {
        for (const RuleMatch& m : report.packets[p].matches) {
            matches.push_back({{"packet", p}, {"rule", m.rule}, {"end", m.end}});
        }
    }
    j["matches"] = std::move(matches);
    return j.dump(2) + "\n";
}

std::string report_csv_header() {
    return "label,packets,bytes,filter_hits,filter_hit_ratio,adfa_transitions,adfa_byte_ratio,"
           "escalated_packets,escalated_ratio,verify_bytes,verify_byte_ratio,matches\n";
}

std::string report_csv_row(const std::string& label, const ScanReport& report) {
    const ScanStats& s = report.stats;
    std::size_t matches = 0;
    for (const auto& p : report.packets) {
        matches += p.matches.size();
    }
    std::ostringstream os;
    os << label << ',' << s.packets << ',' << s.bytes << ',' << s.filter_hits << ',' << fixed(ratio(s.filter_hits, s.bytes))
       << ',' << s.adfa_transitions << ',' << fixed(ratio(s.adfa_transitions, s.bytes)) << ',' << s.escalated_packets
       << ',' << fixed(ratio(s.escalated_packets, s.packets)) << ',' << s.verify_bytes << ','
       << fixed(ratio(s.verify_bytes, s.bytes)) << ',' << matches << '\n';
    return os.str();
}

}  // namespace xav
