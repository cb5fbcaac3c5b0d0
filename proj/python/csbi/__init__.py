"""Complementary sensitivity Bode integrals of feedback loops.

Analytic values from the loop structure (zeros, poles, integrators, gain)
with an independent adaptive-quadrature oracle for verification.
"""

import json as _json

from ._csbi import (
    ImproperTF,
    LoopTF,
    MixedVariables,
    NonCausalClosedLoop,
    OriginZero,
    TFSyntaxError,
    analyze_json,
    closed_loop_poles,
    csbi,
    csbi_numeric,
    format_tf,
    is_stable,
    lemma2_identity,
    lemma2_numeric,
    lemma4_identity,
    lemma4_numeric,
    parse_tf,
    relative_degree,
    verify_json,
)

__all__ = [
    "ImproperTF",
    "LoopTF",
    "MixedVariables",
    "NonCausalClosedLoop",
    "OriginZero",
    "TFSyntaxError",
    "analyze",
    "analyze_json",
    "closed_loop_poles",
    "csbi",
    "csbi_numeric",
    "format_tf",
    "is_stable",
    "lemma2_identity",
    "lemma2_numeric",
    "lemma4_identity",
    "lemma4_numeric",
    "parse_tf",
    "relative_degree",
    "verify",
    "verify_json",
]


def analyze(tf):
    """Analytic report for a transfer-function string, as a dict."""
    text, exit_code = analyze_json(tf)
    report = _json.loads(text)
    report["exit_code"] = exit_code
    return report


def verify(tf):
    """Analytic + quadrature report for a transfer-function string, as a dict."""
    text, exit_code = verify_json(tf)
    report = _json.loads(text)
    report["exit_code"] = exit_code
    return report
