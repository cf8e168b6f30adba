import pathlib

import pytest

import cbn

CATALOG = pathlib.Path(__file__).resolve().parents[2] / "catalog"


def load(name):
    return cbn.parse_trs((CATALOG / name).read_text())


def test_parse():
    trs = load("example.trs")
    assert len(trs) == 4
    assert trs.left_linear and trs.growing and trs.orthogonal
    assert trs.rules[2] == "f(x,a) -> x"


def test_example_verdicts():
    trs = load("example.trs")
    nv = cbn.decide_nf(trs, "nv")
    assert not nv["in_class"]
    assert nv["witness"] == "f(f(a,a),g(f(a,a),f(a,a)))"
    assert all(accepted for _, _, accepted in nv["evidence"])
    assert cbn.decide_nf(trs, "g")["in_class"]
    assert cbn.decide_nf(trs, "g", mode="exhaustive")["in_class"]


def test_rs():
    assert cbn.decide_rs(load("a_to_b.trs"), "s", "s")["in_class"]
    assert not cbn.decide_rs(load("example.trs"), "s", "s")["in_class"]


def test_needed_and_normalize():
    trs = load("example.trs")
    rows = cbn.needed_redexes(trs, "f(f(a,a),g(f(a,a),f(a,a)))", "g")
    assert rows[0] == ("1", "f(a,a)", True)
    result, status, trace = cbn.normalize(trs, "f(f(a,a),g(f(a,a),f(a,a)))")
    assert (result, status, len(trace)) == ("b", "normal form", 3)
    assert cbn.root_needed_redexes(load("a_to_b.trs"), "a", "s", "s") == [("ε", "a", True)]


def test_errors():
    with pytest.raises(ValueError):
        cbn.parse_trs("(RULES f(a -> a)")
    with pytest.raises(ValueError):
        cbn.decide_nf(load("broken.trs"))
    with pytest.raises(ValueError):
        cbn.decide_nf(load("example.trs"), "q")
    with pytest.raises(RuntimeError):
        cbn.decide_nf(load("example.trs"), "g", max_states=3)


def test_selfcheck():
    reports = cbn.selfcheck(load("a_to_b.trs"), 2)
    assert reports and all(r["disagreements"] == 0 for r in reports)
