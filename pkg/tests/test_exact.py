from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st
from mpmath.ctx_iv import MPIntervalContext

from ballvol.exact import (PiExpression, binomial_general, format_rational, parse_rational,
                           pi_expr_arith, rat_arith)

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**6)
pi_exprs = st.dictionaries(st.integers(-3, 3), rationals, max_size=4).map(PiExpression)


def test_rat_arith_examples():
    assert rat_arith(F(1, 6), 1, "mul") == F(1, 6)
    assert rat_arith(F(1, 4), F(1, 32), "mul") == F(1, 128)
    assert rat_arith(F(-15, 128), F(1, 3), "mul") == F(-5, 128)
    assert rat_arith(F(1, 6), F(-1, 45), "add") == F(13, 90)


def test_division_by_zero_is_an_error():
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


@given(rationals, rationals, rationals)
def test_rat_arith_laws(a, b, c):
    assert rat_arith(a, b, "add") == rat_arith(b, a, "add")
    assert rat_arith(rat_arith(a, b, "add"), c, "add") == rat_arith(a, rat_arith(b, c, "add"), "add")
    assert rat_arith(rat_arith(a, b, "mul"), c, "mul") == rat_arith(a, rat_arith(b, c, "mul"), "mul")
    r = rat_arith(a, b, "sub")
    assert r.denominator > 0


@given(rationals)
def test_rational_serialization_round_trip(q):
    text = format_rational(q)
    assert "/" in text
    assert parse_rational(text) == q


def test_rational_serialization_form():
    assert format_rational(F(-5, 128)) == "-5/128"
    assert format_rational(F(3)) == "3/1"


def test_binomial_examples():
    assert binomial_general(4, 3) == 4
    assert binomial_general(F(7, 3), 0) == 1
    assert binomial_general(2, 1) == 2
    assert binomial_general(F(1, 2), 2) == F(-1, 8)


@given(st.integers(0, 40), st.integers(0, 40))
def test_binomial_matches_factorial_ratio(v, k):
    from math import factorial
    if k > v:
        assert binomial_general(v, k) == 0
    else:
        assert binomial_general(v, k) == factorial(v) // (factorial(k) * factorial(v - k))


def test_pi_expression_examples():
    assert PiExpression({1: 1}) * F(4, 3) == PiExpression({1: F(4, 3)})
    assert PiExpression({-1: 2}) * PiExpression({2: F(1, 2)}) == PiExpression({1: 1})
    eps1 = -(PiExpression({1: F(1, 4)}) - PiExpression({2: 4}) + PiExpression({3: 8}))
    assert eps1.terms == {1: F(-1, 4), 2: F(4), 3: F(-8)}


def test_pi_expression_drops_zeros_and_is_immutable():
    e = PiExpression({0: 0, 1: 2}) - PiExpression({1: 2})
    assert e.is_zero() and e.terms == {}
    with pytest.raises(AttributeError):
        e.foo = 1


def test_pi_expression_division_needs_monomial():
    assert PiExpression({1: 1}) / PiExpression({2: F(1, 2)}) == PiExpression({-1: 2})
    with pytest.raises(ValueError):
        PiExpression({1: 1}) / PiExpression({0: 1, 1: 1})


@given(pi_exprs, pi_exprs)
def test_pi_expression_json_round_trip_and_closure(a, b):
    assert PiExpression.from_json(a.to_json()) == a
    for op in ("add", "sub", "mul"):
        r = pi_expr_arith(a, b, op)
        assert all(q != 0 for q in r.terms.values())


@given(pi_exprs, pi_exprs, st.sampled_from(["add", "sub", "mul"]))
def test_evaluation_commutes_with_arithmetic(a, b, op):
    ctx = MPIntervalContext()
    ctx.prec = 200
    lhs = pi_expr_arith(a, b, op).evaluate(ctx)
    x, y = a.evaluate(ctx), b.evaluate(ctx)
    rhs = {"add": x + y, "sub": x - y, "mul": x * y}[op]
    # both enclose the same real, so the enclosures intersect
    assert lhs.a <= rhs.b and rhs.a <= lhs.b
