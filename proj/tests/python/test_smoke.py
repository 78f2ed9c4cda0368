"""Smoke tests for the python bindings: the shipped systems prove, the
labelled outputs match the expected shapes, and the helpers round-trip."""

import os

import pytest

import sizelab

HERE = os.path.dirname(os.path.abspath(__file__))
PROBLEMS = os.path.join(HERE, "..", "..", "problems")


def load(name):
    return sizelab.parse_problem_file(os.path.join(PROBLEMS, name))


def test_check_div():
    report = sizelab.check(load("div.strs"))
    assert report["verdict"] == "TERMINATES"
    div_rule = [r for r in report["rules"] if r["rule"] == "r5"][0]
    assert div_rule["arg_sizes"] == ["s(x)"]
    assert div_rule["rhs_size"] == "s(x)"
    assert div_rule["calls"][0]["decreasing"]


def test_check_rec():
    report = sizelab.check(load("rec.strs"))
    assert report["verdict"] == "TERMINATES"
    lim_rule = [r for r in report["rules"] if r["rule"] == "r3"][0]
    assert lim_rule["calls"][0]["zeta_call"] == ["f"]
    assert lim_rule["calls"][0]["zeta_lhs"] == ["s(f)"]


def test_check_selfloop_unknown():
    assert sizelab.check(load("selfloop.strs"))["verdict"] == "UNKNOWN"


def test_label_plusf():
    report = sizelab.label(load("plusf.strs"))
    assert report["quasi_model"]
    assert report["precedence_terminating"]
    assert len(report["labelled_rules"]) == 7
    assert "plus_{y+1}(0,y) -> y" in report["labelled_rules"]


def test_label_quasiviol():
    report = sizelab.label(load("quasiviol.strs"))
    assert not report["quasi_model"]
    assert report["error"] == "QuasiModelViolation"


def test_ground_tpdb():
    text = sizelab.ground_tpdb(load("div.strs"), 2)
    assert "div_1(s(x),y) -> s(div_0(minus_0(x,y),y))" in text


def test_negative_occurrence_rejected():
    with pytest.raises(sizelab.ParseError):
        load("negocc.strs")


def test_size_helpers():
    assert sizelab.compare_sizes("x", "s(x)") == "LT"
    assert sizelab.compare_sizes("s(max(x,y))", "2*x+y+1") == "LE"
    assert sizelab.eval_size("s(max(x,y))", {"x": 2, "y": 5}) == 6


def test_idts_beta_family():
    assert all(not r["id"].startswith("beta") for r in sizelab.idts(load("div.strs")))
    rec_rules = sizelab.idts(load("rec.strs"))
    assert any(r["id"].startswith("beta") for r in rec_rules)


def test_oracle_halting():
    result = sizelab.oracle(load("div.strs"), depth=3, strategies=5)
    assert result["halting"]
