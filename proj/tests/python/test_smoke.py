import pytest

import xav


def test_dotstar_rule():
    db, report = xav.compile(["ab.*cd"])
    assert report["supported"] == 1
    assert db.scan(b"aabcd") == [(0, 4)]
    assert db.scan(b"cdab") == []


def test_figure3_decomposition():
    splits = xav.decompose("user=[a-f0-9]{32}")
    assert splits[0]["front"] == "user="
    assert splits[0]["ldre"] == "ser="
    db, _ = xav.compile(xav.figure3_rules())
    assert sorted(db.ldres) == sorted(["ser=", "AUTH", "TIAL", "BODY", "mic\\|"])


def test_round_trip_and_workers():
    db, _ = xav.compile(xav.figure3_rules() + ["ab.*cd"])
    blob = db.serialize()
    back = xav.Database.deserialize(blob)
    assert back.serialize() == blob
    packets = xav.random_traffic(50_000, 2, 700) + [b"xxab__cd", b"user=" + b"a" * 32]
    one = xav.scan_report(db, packets, 1)
    assert one == xav.scan_report(back, packets, 4)
    assert one["schema_version"] == 1
    assert {"packet": len(packets) - 1, "rule": 0, "end": 36} in one["matches"]
    with pytest.raises(xav.FormatError):
        xav.Database.deserialize(blob[:-1])


def test_oracle_and_differential():
    assert xav.oracle_match("abc", b"ababc") == [4]
    assert xav.oracle_match("a", b"") == []
    packets = [b"ab  cd", b"cdab", b"abXXcd", b"zzz"]
    summary = xav.differential(["ab.*cd", "ab.{2,3}cd"], packets)
    assert summary["pairs"] == 8
    assert summary["disagreements"] == 0


def test_errors_and_config():
    with pytest.raises(xav.CompileError):
        xav.compile([".*"])
    with pytest.raises(ValueError):
        xav.oracle_match("(", b"")
    cfg = xav.CompileConfig()
    assert cfg.probability_threshold == pytest.approx(1e-4)
    cfg.max_ldre_length = 4
    db, _ = xav.compile(["PARTIAL.*BODY"], cfg)
    assert all(len(l) <= 4 for l in db.ldres)


def test_measurements():
    row = xav.statecount(xav.dotstar_family(6))
    assert not row["classic_capped"]
    assert row["ratio"] > 10
    fp = xav.xor_filter_fp(2000, 100_000, 3)
    assert fp["false_negatives"] == 0
    assert 1 / 512 <= fp["fp_rate"] <= 1 / 128
