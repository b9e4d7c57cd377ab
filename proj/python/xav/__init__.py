"""Python bindings for the XAV regex engine."""

import json

from ._core import (
    CompileConfig,
    CompileError,
    Database,
    FormatError,
    ParseError,
    RuleInfo,
    compile,
    decompose,
    differential,
    dotstar_family,
    figure3_rules,
    oracle_match,
    random_traffic,
    statecount,
    xor_filter_fp,
)

__all__ = [
    "CompileConfig",
    "CompileError",
    "Database",
    "FormatError",
    "ParseError",
    "RuleInfo",
    "compile",
    "decompose",
    "differential",
    "dotstar_family",
    "figure3_rules",
    "oracle_match",
    "random_traffic",
    "scan_report",
    "statecount",
    "xor_filter_fp",
]


def scan_report(db, packets, workers=1):
    """Scan a list of packets and return the JSON report as a dict."""
    return json.loads(db.scan_corpus(list(packets), workers)["json"])
