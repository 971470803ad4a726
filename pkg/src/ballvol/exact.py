"""Exact arithmetic: rationals, pi-polynomials and generalized binomials.

Rationals are plain :class:`fractions.Fraction` values (always normalized,
positive denominator, arbitrary-precision integers).  ``PiExpression`` is the
small closure ``sum q_k * pi**k`` that every exact quantity in this package
lives in.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


def rat(value: RationalLike | str) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot make an exact rational from {type(value).__name__}")


def rat_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    a, b = rat(a), rat(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown rational op {op!r}")


def format_rational(q: Fraction) -> str:
    """Serialize as ``num/den`` (denominator always present)."""
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        den_i = int(den)
        if den_i == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return Fraction(int(num), den_i)
    return Fraction(int(text))


def binomial_general(v: RationalLike, k: int) -> Fraction:
    """``v (v-1) ... (v-k+1) / k!`` for rational ``v`` and integer ``k >= 0``."""
    if k < 0:
        raise ValueError("binomial_general needs k >= 0")
    v = rat(v)
    out = Fraction(1)
    for i in range(k):
        out = out * (v - i) / (i + 1)
    return out


class PiExpression:
    """Exact value ``sum(coeff * pi**k)`` with rational coefficients.

    Immutable; zero coefficients are never stored.  Division is only defined
    by a single monomial, which is all the ball-volume ratios ever need.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        clean: dict[int, Fraction] = {}
        for k, q in (terms or {}).items():
            q = rat(q)
            if q != 0:
                clean[int(k)] = q
        object.__setattr__(self, "_terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PiExpression is immutable")

    @classmethod
    def const(cls, q: RationalLike) -> "PiExpression":
        return cls({0: q})

    @classmethod
    def monomial(cls, q: RationalLike, k: int) -> "PiExpression":
        return cls({k: q})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coeff(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def as_rational(self) -> Fraction:
        if any(k != 0 for k in self._terms):
            raise ValueError(f"{self} is not a pure rational")
        return self.coeff(0)

    def __iter__(self):
        return iter(self._terms.items())

    def _lift(self, other) -> "PiExpression":
        if isinstance(other, PiExpression):
            return other
        if isinstance(other, (int, Fraction)):
            return PiExpression.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, q in other._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + q
        return PiExpression(acc)

    __radd__ = __add__

    def __neg__(self):
        return PiExpression({k: -q for k, q in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc: dict[int, Fraction] = {}
        for k1, q1 in self._terms.items():
            for k2, q2 in other._terms.items():
                acc[k1 + k2] = acc.get(k1 + k2, Fraction(0)) + q1 * q2
        return PiExpression(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.is_monomial():
            raise ValueError("PiExpression division requires a single-term divisor")
        (k, q), = other._terms.items()
        return PiExpression({k1: q1 / q for k1, q1 in self._terms.items()}) * PiExpression({-k: 1})

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"PiExpression({self._terms!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, q in self._terms.items():
            qs = str(q)
            if k == 0:
                parts.append(qs)
            elif k == 1:
                parts.append(f"{qs}·pi")
            else:
                parts.append(f"{qs}·pi^{k}")
        return " + ".join(parts).replace("+ -", "- ")

    def evaluate(self, ctx):
        """Enclosure of the value in an mpmath interval context ``ctx``."""
        total = ctx.mpf(0)
        for k, q in self._terms.items():
            term = ctx.mpf(q.numerator) / ctx.mpf(q.denominator)
            if k:
                term = term * ctx.pi ** k
            total = total + term
        return total

    def to_json_obj(self) -> list[dict]:
        return [{"pi_pow": k, "coeff": format_rational(q)} for k, q in self._terms.items()]

    @classmethod
    def from_json_obj(cls, obj: Iterable[Mapping]) -> "PiExpression":
        acc: dict[int, Fraction] = {}
        for item in obj:
            k = int(item["pi_pow"])
            acc[k] = acc.get(k, Fraction(0)) + parse_rational(item["coeff"])
        return cls(acc)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json(cls, text: str) -> "PiExpression":
        return cls.from_json_obj(json.loads(text))


def pi_expr_arith(a: PiExpression, b: PiExpression, op: str) -> PiExpression:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown PiExpression op {op!r}")
