import os

import pytest

import tocsp

EXAMPLES = os.path.join(os.path.dirname(__file__), "..", "..", "examples_ccsp")


@pytest.fixture
def ab():
    return tocsp.Session(["a", "b"])


def illustration(s):
    left = s.parse("b.0 + t.(a.0 + tau.(b.0 + a.0)) + t.tau.a.0")
    right = s.parse("b.0 + t.(a.0 + tau.a.0) + t.tau.(b.0 + a.0)")
    return left, right


def test_parse_and_print(ab):
    p = ab.parse("a.0 + t.b.0")
    assert str(p) == "a.0 + t.b.0"
    assert p == ab.parse("a.0 + t.b.0")
    assert p.initials() == (["a"], False)
    labels = sorted(label for label, _ in p.transitions())
    assert labels == ["a", "t"]


def test_parse_error(ab):
    with pytest.raises(tocsp.ParseError):
        ab.parse("a.0 +")
    with pytest.raises(tocsp.ParseError):
        ab.parse("c.0")


def test_equivalences(ab):
    left, right = illustration(ab)
    assert tocsp.reactive_bisim(left, right)
    assert not tocsp.strong_bisim(left, right)
    assert tocsp.eq_recursion_free(left, right)
    assert tocsp.reactive_bisim(ab.parse("tau.0 + t.b.0"), ab.parse("tau.0"))
    assert tocsp.x_bisim(ab.parse("a.0 + b.0"), ["a"], ab.parse("a.0"))
    assert tocsp.initials_eq(ab.parse("t.a.0"), ab.parse("t.b.0"))


def test_formulas(ab):
    left, _ = illustration(ab)
    assert tocsp.sat(left, "<{a}><a>true")
    assert not tocsp.sat(left, "<{b}><a>true")
    assert tocsp.sat(ab.parse("a.0 + tau.0"), "<a>true", env=["a"])
    f = tocsp.distinguishing_formula(ab.parse("t.a.0"), ab.parse("t.b.0"))
    assert f == "<{a}><a>true"
    assert tocsp.distinguishing_formula(left, illustration(ab)[1]) is None


def test_hnf_and_minimize(ab):
    p = ab.parse("theta{}{}(a.0 + t.b.0)")
    assert str(tocsp.hnf(p)) == "a.0 + t.b.0"
    n, spec = tocsp.minimize(ab.parse("a.0 + a.0"))
    assert n == 2
    assert tocsp.reactive_bisim(spec, ab.parse("a.0"))


def test_unguarded(ab):
    p = ab.parse("rec x { x = x + a.0 }")
    with pytest.raises(tocsp.BudgetExceeded):
        p.initials()
    with pytest.raises(tocsp.InvalidTerm):
        tocsp.reactive_bisim(p, ab.parse("a.0"))


def test_cli():
    left = os.path.join(EXAMPLES, "left.ccsp")
    right = os.path.join(EXAMPLES, "right.ccsp")
    code, out, _ = tocsp.run_cli(["check", "--file", left, "--file", right, "Left", "Right"])
    assert code == 0 and out == "equivalent\n"
    code, _, _ = tocsp.run_cli(["check", "--file", left, "--file", right, "Left", "Right", "--rel", "strong"])
    assert code == 1
