#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xav/bench.hpp"
#include "xav/engine.hpp"
#include "xav/gen.hpp"
#include "xav/oracle.hpp"

namespace py = pybind11;
using namespace xav;

namespace {

std::span<const std::uint8_t> view(const py::bytes& b, std::string& keep) {
    keep = b;
    return {reinterpret_cast<const std::uint8_t*>(keep.data()), keep.size()};
}

std::vector<Packet> packets_of(const std::vector<py::bytes>& list) {
    std::vector<Packet> out;
    out.reserve(list.size());
    for (const auto& b : list) {
        std::string s = b;
        out.emplace_back(s.begin(), s.end());
    }
    return out;
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return {reinterpret_cast<const char*>(v.data()), v.size()};
}

py::list matches_list(const std::vector<RuleMatch>& ms) {
    py::list out;
    for (const auto& m : ms) {
        out.append(py::make_tuple(m.rule, m.end));
    }
    return out;
}

py::dict stats_dict(const ScanStats& s) {
    py::dict d;
    d["packets"] = s.packets;
    d["bytes"] = s.bytes;
    d["filter_hits"] = s.filter_hits;
    d["adfa_transitions"] = s.adfa_transitions;
    d["reverse_threads"] = s.reverse_threads;
    d["forward_threads"] = s.forward_threads;
    d["reverse_accepts"] = s.reverse_accepts;
    d["events"] = s.events;
    d["escalated_packets"] = s.escalated_packets;
    d["verify_bytes"] = s.verify_bytes;
    d["saturated_records"] = s.saturated_records;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "XAV regex engine core";

    py::register_exception<CompileError>(m, "CompileError");
    py::register_exception<FormatError>(m, "FormatError");
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<CompileConfig>(m, "CompileConfig")
        .def(py::init<>())
        .def_readwrite("probability_threshold", &CompileConfig::probability_threshold)
        .def_readwrite("max_ldre_length", &CompileConfig::max_ldre_length)
        .def_readwrite("long_population", &CompileConfig::long_population)
        .def_readwrite("long_count", &CompileConfig::long_count)
        .def_readwrite("max_expansion", &CompileConfig::max_expansion)
        .def_readwrite("fingerprint_bits", &CompileConfig::fingerprint_bits)
        .def_readwrite("nfa_state_cap", &CompileConfig::nfa_state_cap)
        .def_readwrite("dfa_state_cap", &CompileConfig::dfa_state_cap)
        .def_readwrite("record_cap", &CompileConfig::record_cap)
        .def_readwrite("max_alternatives", &CompileConfig::max_alternatives);

    py::class_<RuleInfo>(m, "RuleInfo")
        .def_readonly("id", &RuleInfo::id)
        .def_readonly("pattern", &RuleInfo::pattern)
        .def_readonly("supported", &RuleInfo::supported)
        .def_readonly("reason", &RuleInfo::reason);

    py::class_<Database>(m, "Database")
        .def_readonly("rules", &Database::rules)
        .def_property_readonly("anchor_states", &Database::anchor_states)
        .def_property_readonly("reverse_states", [](const Database& db) { return db.reverse.size(); })
        .def_property_readonly("forward_states", [](const Database& db) { return db.forward.size(); })
        .def_property_readonly("memory_bytes", &Database::memory_bytes)
        .def_property_readonly("ldres",
                               [](const Database& db) {
                                   std::vector<std::string> out;
                                   for (const auto& s : db.splits) out.push_back(s.ldre);
                                   return out;
                               })
        .def("serialize", [](const Database& db) { return to_bytes(db.serialize()); })
        .def_static("deserialize",
                    [](const py::bytes& b) {
                        std::string keep;
                        return Database::deserialize(view(b, keep));
                    })
        .def(
            "scan",
            [](const Database& db, const py::bytes& packet) {
                std::string keep;
                auto data = view(packet, keep);
                ScanStats stats;
                std::vector<RuleMatch> ms;
                {
                    py::gil_scoped_release release;
                    ms = scan_packet(db, data, stats);
                }
                return matches_list(ms);
            },
            py::arg("packet"), "(rule, end) pairs for one packet")
        .def(
            "scan_corpus",
            [](const Database& db, const std::vector<py::bytes>& packets, unsigned workers) {
                auto ps = packets_of(packets);
                ScanReport rep;
                {
                    py::gil_scoped_release release;
                    rep = scan_corpus(db, ps, workers);
                }
                py::list per_packet;
                for (const auto& p : rep.packets) per_packet.append(matches_list(p.matches));
                py::dict d;
                d["matches"] = per_packet;
                d["stats"] = stats_dict(rep.stats);
                d["json"] = report_json(rep);
                return d;
            },
            py::arg("packets"), py::arg("workers") = 1);

    m.def(
        "compile",
        [](const std::vector<std::string>& rules, const CompileConfig& config) {
            CompileResult r = compile(rules, config);
            py::dict report;
            report["rules"] = r.report.rules;
            report["supported"] = r.report.supported;
            report["splits"] = r.report.splits;
            report["filter_keys"] = r.report.filter_keys;
            report["reverse_states"] = r.report.reverse_states;
            report["forward_states"] = r.report.forward_states;
            report["lusdfa_states"] = r.report.lusdfa_states;
            py::dict t;
            t["decompose"] = r.report.timings.decompose_ms;
            t["filter"] = r.report.timings.filter_ms;
            t["anchor_dfa"] = r.report.timings.anchor_dfa_ms;
            t["verifier"] = r.report.timings.verifier_ms;
            report["timings_ms"] = t;
            report["notes"] = r.report.notes;
            return py::make_tuple(std::move(r.db), report);
        },
        py::arg("rules"), py::arg("config") = CompileConfig{});

    m.def(
        "oracle_match",
        [](const std::string& pattern, const py::bytes& data) {
            std::string keep;
            auto d = view(data, keep);
            return oracle_match(parse_regex(pattern), d).ends;
        },
        py::arg("pattern"), py::arg("data"), "end offsets of matches under the reference matcher");

    m.def(
        "decompose",
        [](const std::string& pattern, const CompileConfig& config) {
            Decomposition d = decompose(parse_regex(pattern), config);
            py::list splits;
            for (const auto& s : d.splits) {
                py::dict e;
                e["k"] = s.fragment;
                e["natural"] = s.natural.to_pattern();
                e["ldre"] = s.ldre.to_pattern();
                e["probability"] = s.ldre.probability();
                e["front"] = to_pattern(s.front);
                e["back"] = s.has_back() ? to_pattern(s.back) : std::string();
                splits.append(e);
            }
            return splits;
        },
        py::arg("pattern"), py::arg("config") = CompileConfig{});

    m.def(
        "differential",
        [](const std::vector<std::string>& rules, const std::vector<py::bytes>& packets) {
            auto ps = packets_of(packets);
            DiffSummary s = differential(rules, ps);
            py::dict d;
            d["pairs"] = s.pairs;
            d["oracle_matches"] = s.oracle_matches;
            d["disagreements"] = s.disagreements;
            d["unsupported"] = s.unsupported;
            return d;
        },
        py::arg("rules"), py::arg("packets"));

    m.def("dotstar_family", &dotstar_family, py::arg("k"));
    m.def("figure3_rules", &figure3_rules);
    m.def(
        "random_traffic",
        [](std::uint64_t bytes, std::uint64_t seed, std::size_t packet_size) {
            py::list out;
            for (const auto& p : random_traffic(bytes, seed, packet_size)) out.append(to_bytes(p));
            return out;
        },
        py::arg("bytes"), py::arg("seed"), py::arg("packet_size") = 1500);

    m.def(
        "statecount",
        [](const std::vector<std::string>& rules) {
            StateCountRow r = measure_statecount(rules);
            py::dict d;
            d["classic_states"] = r.classic_states;
            d["classic_capped"] = r.classic_capped;
            d["anchor_states"] = r.anchor_states;
            d["ratio"] = r.ratio;
            return d;
        },
        py::arg("rules"));

    m.def(
        "xor_filter_fp",
        [](std::size_t keys, std::size_t probes, std::uint64_t seed) {
            FilterFpRow r = measure_filter_fp(keys, probes, seed);
            py::dict d;
            d["fp_rate"] = r.fp_rate;
            d["false_negatives"] = r.false_negatives;
            d["memory_bits"] = r.memory_bits;
            return d;
        },
        py::arg("keys"), py::arg("probes"), py::arg("seed") = 1);
}
