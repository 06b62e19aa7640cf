"""Smoke tests for the lucretia python package (built from the C++ core)."""

import os

import pytest

lucretia = pytest.importorskip("lucretia")

BOTH_BRANCHES = """
let ha = true in
let a = "arg" in
let x = new in
if ha then x.m = a else x.m = "help"
"""

INIT_APP = """
init : [X, int; ] => [int; X.m:int]
func init(self, x) { self.m = x }
let o = new in
init(o, 42)
"""

CRASH = """
g : [X; X.m:bot] => [int; X.m:bot|int]
func g(x) { ifhasattr(x, m) then x.m + 1 else 0 }
let o = new in
o.m = "boom";
g(o)
"""


def test_check_golden_judgment():
    doc = lucretia.check(BOTH_BRANCHES)
    assert doc["status"] == "ok"
    assert doc["diagnostics"] == []
    assert doc["judgment"]["type"] == "string"
    assert doc["judgment"]["post"] == "X <# {m: string}"


def test_run_returns_value_and_judgment():
    doc = lucretia.run(INIT_APP)
    assert doc["status"] == "ok"
    assert doc["value"] == {"text": "42", "type": "int"}
    assert "m: int" in doc["judgment"]["post"]


def test_check_rejects_and_reports_codes():
    doc = lucretia.check(CRASH)
    assert doc["status"] == "check-error"
    codes = [d["code"] for d in doc["diagnostics"]]
    assert "E-APPLY-NONE" in codes
    span = doc["diagnostics"][0]["span"]
    assert span["line"] >= 1 and span["column"] >= 1


def test_unchecked_run_crashes_like_the_paper_example():
    doc = lucretia.run(CRASH, unchecked=True)
    assert doc["status"] == "runtime-error"
    assert doc["diagnostics"][0]["code"] == "R-primop-error"


def test_trace_is_deterministic():
    a = lucretia.trace(INIT_APP)
    b = lucretia.trace(INIT_APP)
    assert a == b
    assert a["trace"][0].startswith("#1 ")
    assert a["value"]["text"] == "42"


def test_fuzz_report_shape():
    doc = lucretia.fuzz(seed=7, count=25, depth=3)
    report = doc["fuzz_report"]
    assert report["generated"] == 25
    assert report["violations"] == []
    assert doc["status"] == "ok"


def test_pretty_round_trip():
    text = lucretia.pretty("self.x = self.x + dx")
    assert "let" in text and "$" not in text
    again = lucretia.pretty(text)
    # pretty is stable once lowered
    assert lucretia.pretty(again) == again


def test_parse_error_raises():
    with pytest.raises(ValueError):
        lucretia.pretty("let = 3")


def test_samples_check_or_reject_as_documented():
    samples = os.environ.get("LUCRETIA_SAMPLES")
    if not samples:
        pytest.skip("LUCRETIA_SAMPLES not set")
    expectations = {
        "both_branches.luc": "ok",
        "one_branch.luc": "ok",
        "object_one_branch.luc": "ok",
        "init_app.luc": "ok",
        "width_call.luc": "ok",
        "intersection.luc": "ok",
        "intersection_distinct.luc": "ok",
        "ifhasattr_fun.luc": "ok",
        "maybe_probe.luc": "ok",
        "forget_constraint.luc": "check-error",
        "forget_field.luc": "check-error",
        "bot_injection.luc": "check-error",
        "unchecked_crash.luc": "check-error",
        "diverge.luc": "check-error",
    }
    for name, expected in expectations.items():
        with open(os.path.join(samples, name), encoding="utf-8") as handle:
            doc = lucretia.check(handle.read())
        assert doc["status"] == expected, name
