#include "doctest.h"
#include "support.hpp"

#include <filesystem>

#include "xav/engine.hpp"
#include "xav/gen.hpp"

using namespace xav;

namespace {

std::vector<RuleMatch> scan_one(const Database& db, std::string_view s, ScanStats* out = nullptr) {
    ScanStats stats;
    auto b = xavtest::bytes(s);
    auto m = scan_packet(db, b, stats);
    if (out) *out = stats;
    return m;
}

std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "xav_unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("dot-star rule end to end") {
    auto db = compile({"ab.*cd"}).db;
    ScanStats st;
    CHECK(scan_one(db, "aabcd", &st) == std::vector<RuleMatch>{{0, 4}});
    CHECK(st.filter_hits == 2);
    CHECK(st.reverse_threads == st.filter_hits);
    CHECK(scan_one(db, "cdab").empty());
    CHECK(scan_one(db, "abcd") == std::vector<RuleMatch>{{0, 3}});
    CHECK(scan_one(db, "abcdcd") == std::vector<RuleMatch>{{0, 3}, {0, 5}});
}

TEST_CASE("single literal rule has no lusRE and no forward part") {
    auto r = compile({"abc"});
    const Database& db = r.db;
    REQUIRE(db.tables.size() == 1);
    CHECK(db.tables[0].lsre_count() == 1);
    CHECK(db.tables[0].gaps[0].kind == LusReKind::Empty);
    CHECK(db.tables[0].gaps[1].kind == LusReKind::Empty);
    CHECK(db.splits[0].back == -1);
    CHECK(r.report.forward_states <= 1);
    CHECK(scan_one(db, "xabcx") == std::vector<RuleMatch>{{0, 3}});
    CHECK(scan_one(db, "xabx").empty());
}

TEST_CASE("counted gaps inside one lsRE") {
    auto db = compile({"ab.{2,3}cd"}).db;
    CHECK(scan_one(db, "abXcd").empty());
    CHECK(scan_one(db, "abXXcd") == std::vector<RuleMatch>{{0, 5}});
    CHECK(scan_one(db, "abXXXcd") == std::vector<RuleMatch>{{0, 6}});
    CHECK(scan_one(db, "abXXXXcd").empty());
}

TEST_CASE("traffic that never hits the filter") {
    auto db = compile({"ab.*cd"}).db;
    ScanStats st;
    CHECK(scan_one(db, std::string(500, 'z'), &st).empty());
    CHECK(st.filter_hits == 0);
    CHECK(st.reverse_threads == 0);
    CHECK(st.adfa_transitions == 0);
}

TEST_CASE("figure-3 rule set") {
    auto r = compile(figure3_rules());
    const Database& db = r.db;
    CHECK(r.report.supported == 4);
    std::set<std::string> ldres;
    for (const auto& s : db.splits) ldres.insert(s.ldre);
    CHECK(ldres == std::set<std::string>{"ser=", "AUTH", "TIAL", "BODY", "mic\\|"});

    std::string hex(32, 'a');
    CHECK(scan_one(db, "GET /?user=" + hex + " HTTP") == std::vector<RuleMatch>{{0, 42}});
    CHECK(scan_one(db, "user=" + std::string(31, 'a') + "z").empty());
    CHECK(scan_one(db, "AUTH " + std::string(100, 'q')) == std::vector<RuleMatch>{{1, 104}});
    CHECK(scan_one(db, "AUTH " + std::string(99, 'q') + "\n").empty());
    CHECK(scan_one(db, "PARTIAL zz 7 yy BODY") == std::vector<RuleMatch>{{2, 19}});
    CHECK(scan_one(db, "PARTIAL zz7 yy BODY").empty());
    CHECK(scan_one(db, std::string("x123\0mic|", 9)) == std::vector<RuleMatch>{{3, 8}});
    CHECK(scan_one(db, std::string("xab\0mic|", 8)).empty());
    CHECK(r.report.timings.decompose_ms >= 0);
}

TEST_CASE("unsupported rules are reported and skipped") {
    auto r = compile({"ab.*cd", "(", ".*", "[a-z]{3}"});
    CHECK(r.report.rules == 4);
    CHECK(r.report.supported == 1);
    CHECK(r.db.rules[1].reason.find("parse") != std::string::npos);
    CHECK_FALSE(r.db.rules[2].supported);
    CHECK_THROWS_AS(compile({".*", "("}), CompileError);
    CHECK(scan_one(r.db, "abcd") == std::vector<RuleMatch>{{0, 3}});
}

TEST_CASE("database serialization round-trips") {
    std::vector<std::string> rules = figure3_rules();
    rules.push_back("x\\d{1,3}[a-z]{2}.*abcd[^\\n]{60}efgh$");
    rules.push_back("^(abcd|wxyz).*[^x]+qqqq");
    auto db = compile(rules).db;
    auto blob = db.serialize();
    Database back = Database::deserialize(blob);
    CHECK(back.serialize() == blob);
    CHECK(back.tables == db.tables);
    CHECK(back.splits == db.splits);
    CHECK(back.reverse == db.reverse);
    CHECK(back.forward == db.forward);

    auto traffic = random_traffic(20000, 3, 500);
    traffic.push_back(xavtest::bytes("wxyz__abcd_qqqq"));
    auto a = scan_corpus(db, traffic);
    auto b = scan_corpus(back, traffic);
    CHECK(report_json(a) == report_json(b));

    auto cut = blob;
    cut.resize(blob.size() - 3);
    CHECK_THROWS_AS(Database::deserialize(cut), FormatError);
    auto extra = blob;
    extra.push_back(0);
    CHECK_THROWS_AS(Database::deserialize(extra), FormatError);
    auto bad = blob;
    bad[0] = 'Y';
    CHECK_THROWS_AS(Database::deserialize(bad), FormatError);
}

TEST_CASE("worker count does not change the report") {
    Rng rng(11);
    auto c = random_diff_case(rng, 20, 300);
    auto db = compile(c.rules).db;
    auto one = report_json(scan_corpus(db, c.packets, 1));
    CHECK(one == report_json(scan_corpus(db, c.packets, 4)));
    CHECK(one == report_json(scan_corpus(db, c.packets, 8)));
    CHECK(scan_corpus(db, {}, 4).packets.empty());
}

TEST_CASE("stats sanity") {
    Rng rng(5);
    auto c = random_diff_case(rng, 20, 200);
    auto db = compile(c.rules).db;
    auto rep = scan_corpus(db, c.packets, 2);
    const ScanStats& s = rep.stats;
    CHECK(s.packets == c.packets.size());
    CHECK(s.reverse_threads == s.filter_hits);
    CHECK(s.forward_threads <= s.reverse_accepts);
    CHECK(s.escalated_packets <= s.packets);
}

TEST_CASE("corpus formats") {
    std::vector<Packet> packets{xavtest::bytes("one"), xavtest::bytes(""), xavtest::bytes("three")};
    auto cpath = temp_path("c.lpc");
    write_container(cpath, packets);
    auto c = load_corpus(cpath);
    CHECK_FALSE(c.partial);
    CHECK(c.packets == packets);

    auto raw = read_file(cpath);
    raw.resize(raw.size() - 2);
    auto tpath = temp_path("t.lpc");
    write_file(tpath, raw);
    auto t = load_corpus(tpath);
    CHECK(t.partial);
    CHECK(t.packets.size() == 2);

    auto dir = temp_path("dir");
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "b", xavtest::bytes("second"));
    write_file(dir / "a", xavtest::bytes("first"));
    auto d = load_corpus(dir);
    REQUIRE(d.packets.size() == 2);
    CHECK(d.packets[0] == xavtest::bytes("first"));

    auto r = load_corpus(dir / "a", CorpusFormat::Raw);
    CHECK(r.packets.size() == 1);
    CHECK_THROWS(load_corpus(temp_path("missing.bin")));
    CHECK_THROWS_AS(parse_corpus_format("pcap"), std::invalid_argument);
}

TEST_CASE("report formats") {
    auto db = compile({"ab.*cd"}).db;
    ScanReport rep = scan_corpus(db, {xavtest::bytes("abcd"), xavtest::bytes("zz")});
    auto j = report_json(rep);
    CHECK(j.find("\"schema_version\": 1") != std::string::npos);
    CHECK(j.find("\"filter_hit_ratio\"") != std::string::npos);
    CHECK(j.find("\"rule\": 0") != std::string::npos);
    CHECK(report_csv_header().rfind("label,packets,bytes,", 0) == 0);
    CHECK(report_csv_row("x", rep).rfind("x,2,6,", 0) == 0);
}

TEST_CASE("random traffic is filtered more than text") {
    auto db = compile(figure3_rules()).db;
    auto rnd = scan_corpus(db, random_traffic(1 << 20, 1));
    auto txt = scan_corpus(db, text_traffic(1 << 20, 1));
    double r = static_cast<double>(rnd.stats.filter_hits) / static_cast<double>(rnd.stats.bytes);
    double t = static_cast<double>(txt.stats.filter_hits) / static_cast<double>(txt.stats.bytes);
    CHECK(r < t);
}

TEST_CASE("small differential run") {
    Rng rng(99);
    DiffSummary total;
    for (int i = 0; i < 8; ++i) {
        auto c = random_diff_case(rng, 16, 16);
        total += differential(c.rules, c.packets);
    }
    CHECK(total.pairs >= 1800);
    CHECK(total.oracle_matches > 0);
    CHECK(total.disagreements == 0);
    CHECK(total.saturated == 0);
}
