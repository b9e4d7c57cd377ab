// xav command-line front end: compile, scan, diff, bench, gen.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xav/bench.hpp"
#include "xav/engine.hpp"
#include "xav/gen.hpp"

using namespace xav;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDisagree = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ThresholdFlags {
    double pt = 1e-4;
    std::uint32_t lt = 8;
    std::uint32_t long_pop = 128;
    std::uint32_t long_count = 50;
    std::uint64_t emax = 1024;
    std::uint32_t fp_bits = 8;
    std::size_t cap = 1'000'000;
    std::uint32_t record_cap = 64;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pt", pt, "ldRE probability threshold")->capture_default_str();
        cmd->add_option("--lt", lt, "maximum ldRE length (2, 4 or 8)")->capture_default_str();
        cmd->add_option("--long-pop", long_pop, "class population above which a repeat may be long")
            ->capture_default_str();
        cmd->add_option("--long-count", long_count, "repeat bound above which a big class is long")
            ->capture_default_str();
        cmd->add_option("--emax", emax, "maximum concrete keys per ldRE")->capture_default_str();
        cmd->add_option("--fp-bits", fp_bits, "xor filter fingerprint bits")->capture_default_str();
        cmd->add_option("--state-cap", cap, "NFA/DFA state cap")->capture_default_str();
        cmd->add_option("--record-cap", record_cap, "verification records per fragment")->capture_default_str();
    }

    [[nodiscard]] CompileConfig config() const {
        if (lt != 2 && lt != 4 && lt != 8) {
            throw UsageError("--lt must be 2, 4 or 8");
        }
        if (!(pt > 0 && pt <= 1)) {
            throw UsageError("--pt must be in (0, 1]");
        }
        if (fp_bits < 1 || fp_bits > 16) {
            throw UsageError("--fp-bits must be in [1, 16]");
        }
        if (record_cap == 0) {
            throw UsageError("--record-cap must be positive");
        }
        CompileConfig c;
        c.probability_threshold = pt;
        c.max_ldre_length = lt;
        c.long_population = long_pop;
        c.long_count = long_count;
        c.max_expansion = emax;
        c.fingerprint_bits = fp_bits;
        c.nfa_state_cap = cap;
        c.dfa_state_cap = cap;
        c.record_cap = record_cap;
        return c;
    }
};

std::vector<std::string> load_rules(const std::string& path) {
    std::vector<std::string> out;
    for (const RuleLine& l : read_rule_file(path)) {
        if (!l.flags.empty()) {
            std::cerr << path << ":" << l.line_number << ": flags '" << l.flags << "' are not supported; rule skipped\n";
            continue;
        }
        out.push_back(l.pattern);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

std::string compile_report_json(const CompileResult& r) {
    nlohmann::json j;
    j["rules"] = r.report.rules;
    j["supported"] = r.report.supported;
    j["splits"] = r.report.splits;
    j["filter_keys"] = r.report.filter_keys;
    j["reverse_states"] = r.report.reverse_states;
    j["forward_states"] = r.report.forward_states;
    j["lusdfa_states"] = r.report.lusdfa_states;
    j["memory_bytes"] = r.db.memory_bytes();
    j["timings_ms"] = {{"decompose", r.report.timings.decompose_ms},
                       {"filter", r.report.timings.filter_ms},
                       {"anchor_dfa", r.report.timings.anchor_dfa_ms},
                       {"verifier", r.report.timings.verifier_ms}};
    nlohmann::json skipped = nlohmann::json::array();
    for (const RuleInfo& info : r.db.rules) {
        if (!info.supported) {
            skipped.push_back({{"rule", info.id}, {"pattern", info.pattern}, {"reason", info.reason}});
        }
    }
    j["skipped"] = std::move(skipped);
    j["notes"] = r.report.notes;
    return j.dump(2) + "\n";
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

int run_compile(const std::string& rules_path, const std::string& out, const std::string& report,
                const ThresholdFlags& flags) {
    CompileConfig cfg = flags.config();
    CompileResult r = compile(load_rules(rules_path), cfg);
    write_file(out, r.db.serialize());
    write_text(report, compile_report_json(r));
    return 0;
}

int run_scan(const std::string& db_path, const std::string& corpus, const std::string& format, unsigned workers,
             const std::string& json, const std::string& csv, const std::string& label) {
    if (workers == 0) {
        throw UsageError("--workers must be positive");
    }
    CorpusFormat fmt_kind = CorpusFormat::Auto;
    try {
        fmt_kind = parse_corpus_format(format);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Database db = Database::deserialize(read_file(db_path));
    Corpus c = load_corpus(corpus, fmt_kind);
    ScanReport rep = scan_corpus(db, c.packets, workers);
    rep.partial = c.partial;
    rep.error = c.error;
    write_text(json, report_json(rep));
    if (!csv.empty()) {
        write_text(csv, report_csv_header() + report_csv_row(label, rep));
    }
    if (rep.partial) {
        std::cerr << "corpus read incomplete: " << rep.error << "\n";
        return kExitError;
    }
    return 0;
}

int run_diff(const std::string& rules_path, const std::string& corpus, std::size_t cases, std::uint64_t seed,
             const ThresholdFlags& flags) {
    CompileConfig cfg = flags.config();
    if (rules_path.empty() != corpus.empty()) {
        throw UsageError("--rules and --corpus go together");
    }
    DiffSummary total;
    if (!rules_path.empty()) {
        Corpus c = load_corpus(corpus);
        if (c.packets.size() > cases) {
            c.packets.resize(cases);
        }
        total = differential(load_rules(rules_path), c.packets, cfg);
    } else {
        Rng rng(seed);
        while (total.pairs < cases) {
            DiffCase d = random_diff_case(rng, 12, 16);
            total += differential(d.rules, d.packets, cfg);
        }
    }
    std::cout << "pairs " << total.pairs << ", oracle matches " << total.oracle_matches << ", unsupported rules "
              << total.unsupported << "/" << total.rules << ", saturated records " << total.saturated << "\n";
    for (const Disagreement& d : total.examples) {
        std::cout << "  packet " << d.packet << " rule " << d.rule << ": engine " << d.engine << " oracle " << d.oracle
                  << "\n";
    }
    std::cout << total.disagreements << " disagreements\n";
    return total.disagreements == 0 ? 0 : kExitDisagree;
}

int run_bench(const std::string& suite, const std::string& k_range, const std::string& rules_path,
              const std::string& corpus, std::uint64_t bytes, std::uint64_t seed, std::size_t keys,
              std::size_t probes, unsigned workers, const std::string& out, const ThresholdFlags& flags) {
    CompileConfig cfg = flags.config();
    std::ostringstream csv;
    auto rule_sets = [&]() {
        std::vector<std::pair<std::string, std::vector<std::string>>> sets;
        if (!rules_path.empty()) {
            sets.emplace_back(rules_path, load_rules(rules_path));
            return sets;
        }
        std::vector<std::size_t> ks;
        try {
            ks = parse_range(k_range);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--k: ") + e.what());
        }
        for (std::size_t k : ks) {
            if (k == 0 || k > 338) {
                throw UsageError("--k values must be in [1, 338]");
            }
            sets.emplace_back(std::to_string(k), dotstar_family(k));
        }
        return sets;
    };
    if (suite == "statecount") {
        csv << "k,classic_states,classic_capped,anchor_states,reverse_states,forward_states,ratio,classic_ms,anchor_ms\n";
        for (const auto& [label, rules] : rule_sets()) {
            StateCountRow r = measure_statecount(rules, cfg);
            csv << label << ',' << r.classic_states << ',' << (r.classic_capped ? 1 : 0) << ',' << r.anchor_states << ','
                << r.reverse_states << ',' << r.forward_states << ',' << fmt(r.ratio) << ',' << fmt(r.classic_ms) << ','
                << fmt(r.anchor_ms) << '\n';
        }
    } else if (suite == "compression") {
        csv << "k,states,compressed_bytes,dense_bytes,ratio,lookup_equal\n";
        for (const auto& [label, rules] : rule_sets()) {
            CompressionRow r = measure_compression(rules, cfg);
            csv << label << ',' << r.states << ',' << r.compressed_bytes << ',' << r.dense_bytes << ',' << fmt(r.ratio)
                << ',' << (r.lookup_equal ? 1 : 0) << '\n';
        }
    } else if (suite == "filterfp") {
        FilterFpRow r = measure_filter_fp(keys, probes, seed, cfg.fingerprint_bits);
        csv << "keys,probes,false_positives,fp_rate,false_negatives,memory_bits,bits_per_key,attempts\n";
        csv << r.keys << ',' << r.probes << ',' << r.false_positives << ',' << fmt(r.fp_rate) << ',' << r.false_negatives
            << ',' << r.memory_bits << ',' << fmt(static_cast<double>(r.memory_bits) / static_cast<double>(r.keys))
            << ',' << r.attempts << '\n';
    } else if (suite == "overheads") {
        std::vector<std::string> rules = rules_path.empty() ? figure3_rules() : load_rules(rules_path);
        Database db = compile(rules, cfg).db;
        std::vector<Packet> packets;
        std::string label;
        if (!corpus.empty()) {
            Corpus c = load_corpus(corpus);
            packets = std::move(c.packets);
            label = corpus;
        } else {
            packets = random_traffic(bytes, seed);
            label = "random-" + std::to_string(seed);
        }
        OverheadRow r = measure_overheads(db, packets, workers);
        std::string header = report_csv_header();
        header.pop_back();
        std::string row = report_csv_row(label, r.report);
        row.pop_back();
        csv << header << ",seconds,mb_per_s,memory_bytes\n";
        csv << row << ',' << fmt(r.seconds) << ',' << fmt(r.mb_per_s) << ',' << r.memory_bytes << '\n';
    } else {
        throw UsageError("unknown suite: " + suite);
    }
    write_text(out, csv.str());
    return 0;
}

int run_gen(const std::string& family, const std::string& traffic, std::size_t k, std::uint64_t bytes,
            std::uint64_t seed, std::size_t packet_size, const std::string& out) {
    if (family.empty() == traffic.empty()) {
        throw UsageError("gen needs exactly one of --family or --traffic");
    }
    if (!family.empty()) {
        std::vector<std::string> rules;
        if (family == "dotstar") {
            if (k == 0 || k > 338) {
                throw UsageError("--k must be in [1, 338]");
            }
            rules = dotstar_family(k);
        } else if (family == "figure3") {
            rules = figure3_rules();
        } else if (family == "random") {
            Rng rng(seed);
            for (std::size_t i = 0; i < k; ++i) {
                rules.push_back(random_rule(rng));
            }
        } else {
            throw UsageError("unknown family: " + family);
        }
        std::string text;
        for (const auto& r : rules) {
            text += r + "\n";
        }
        write_text(out, text);
        return 0;
    }
    if (out.empty() || out == "-") {
        throw UsageError("--traffic needs --out");
    }
    if (packet_size == 0) {
        throw UsageError("--packet-size must be positive");
    }
    std::vector<Packet> packets;
    if (traffic == "random") {
        packets = random_traffic(bytes, seed, packet_size);
    } else if (traffic == "text") {
        packets = text_traffic(bytes, seed, packet_size);
    } else {
        throw UsageError("unknown traffic kind: " + traffic);
    }
    write_container(out, packets);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xav: xor-filter prefiltered anchor-DFA regex matcher"};
    app.require_subcommand(1);

    ThresholdFlags th;

    std::string rules_path, out_path, report_path;
    auto* c_compile = app.add_subcommand("compile", "compile a rule file into a database");
    c_compile->add_option("--rules", rules_path, "rule file, one regex per line")->required();
    c_compile->add_option("--out", out_path, "database output path")->required();
    c_compile->add_option("--report", report_path, "compile report JSON (default stdout)");
    th.attach(c_compile);

    std::string db_path, corpus, format = "auto", json_path, csv_path, label = "scan";
    unsigned workers = 1;
    auto* c_scan = app.add_subcommand("scan", "scan a corpus");
    c_scan->add_option("--db", db_path, "database file")->required();
    c_scan->add_option("--corpus", corpus, "raw file, directory, or .lpc container")->required();
    c_scan->add_option("--format", format, "auto|raw|dir|container")->capture_default_str();
    c_scan->add_option("--workers", workers, "worker threads")->capture_default_str();
    c_scan->add_option("--json", json_path, "JSON report path (default stdout)");
    c_scan->add_option("--csv", csv_path, "CSV summary path");
    c_scan->add_option("--label", label, "CSV row label")->capture_default_str();

    std::size_t cases = 1000;
    std::uint64_t seed = 1;
    auto* c_diff = app.add_subcommand("diff", "differential test against the reference matcher");
    c_diff->add_option("--rules", rules_path, "rule file (with --corpus)");
    c_diff->add_option("--corpus", corpus, "corpus (with --rules)");
    c_diff->add_option("--cases", cases, "generated pairs, or packet limit with --corpus")->capture_default_str();
    c_diff->add_option("--seed", seed, "generator seed")->capture_default_str();
    th.attach(c_diff);

    std::string suite, k_range = "1:20";
    std::uint64_t bytes = 10'000'000;
    std::size_t keys = 10'000, probes = 1'000'000;
    auto* c_bench = app.add_subcommand("bench", "measurement suites, CSV output");
    c_bench->add_option("--suite", suite, "statecount|compression|filterfp|overheads")
        ->required()
        ->check(CLI::IsMember({"statecount", "compression", "filterfp", "overheads"}));
    c_bench->add_option("--k", k_range, "dotstar sizes: a:b, a,b,c or n")->capture_default_str();
    c_bench->add_option("--rules", rules_path, "rule file instead of the dotstar family");
    c_bench->add_option("--corpus", corpus, "overheads: corpus instead of random traffic");
    c_bench->add_option("--bytes", bytes, "overheads: random traffic size")->capture_default_str();
    c_bench->add_option("--seed", seed, "generator seed")->capture_default_str();
    c_bench->add_option("--keys", keys, "filterfp: inserted keys")->capture_default_str();
    c_bench->add_option("--probes", probes, "filterfp: non-member probes")->capture_default_str();
    c_bench->add_option("--workers", workers, "overheads: worker threads")->capture_default_str();
    c_bench->add_option("--out", out_path, "CSV output path (default stdout)");
    th.attach(c_bench);

    std::string family, traffic;
    std::size_t k = 20, packet_size = 1500;
    auto* c_gen = app.add_subcommand("gen", "synthetic rules or traffic");
    c_gen->add_option("--family", family, "dotstar|figure3|random");
    c_gen->add_option("--traffic", traffic, "random|text");
    c_gen->add_option("--k", k, "rules to generate")->capture_default_str();
    c_gen->add_option("--bytes", bytes, "traffic bytes")->capture_default_str();
    c_gen->add_option("--seed", seed, "generator seed")->capture_default_str();
    c_gen->add_option("--packet-size", packet_size, "traffic packet size")->capture_default_str();
    c_gen->add_option("--out", out_path, "output path (rules default to stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_compile->parsed()) return run_compile(rules_path, out_path, report_path, th);
        if (c_scan->parsed()) return run_scan(db_path, corpus, format, workers, json_path, csv_path, label);
        if (c_diff->parsed()) return run_diff(rules_path, corpus, cases, seed, th);
        if (c_bench->parsed())
            return run_bench(suite, k_range, rules_path, corpus, bytes, seed, keys, probes, workers, out_path, th);
        if (c_gen->parsed()) return run_gen(family, traffic, k, bytes, seed, packet_size, out_path);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
