"""Bernoulli numbers and polynomials over exact rationals.

Convention: ``B_1 = -1/2`` (generating function ``t / (e^t - 1)``).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .exact import RationalLike, rat


class BernoulliCache:
    """Incrementally grown table of ``B_0..B_J`` and the monomial
    coefficients of ``B_t(x)``.

    Growth is guarded by a lock so concurrent readers always see a
    consistent prefix.
    """

    def __init__(self):
        self._numbers: list[Fraction] = [Fraction(1)]
        self._polys: dict[int, tuple[Fraction, ...]] = {}
        self._lock = threading.Lock()

    def _extend(self, j: int) -> None:
        with self._lock:
            nums = self._numbers
            # sum_{k=0}^{m} C(m+1, k) B_k = 0
            for m in range(len(nums), j + 1):
                acc = sum((comb(m + 1, k) * nums[k] for k in range(m)), Fraction(0))
                nums.append(-acc / (m + 1))

    def number(self, j: int) -> Fraction:
        if j < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if j >= len(self._numbers):
            self._extend(j)
        return self._numbers[j]

    def poly_coeffs(self, t: int) -> tuple[Fraction, ...]:
        """Coefficients ``[a_0, ..., a_t]`` with ``B_t(x) = sum a_i x**i``."""
        if t < 0:
            raise ValueError("Bernoulli polynomial degree must be >= 0")
        cached = self._polys.get(t)
        if cached is None:
            self.number(t)
            coeffs = [Fraction(0)] * (t + 1)
            for k in range(t + 1):
                coeffs[t - k] = comb(t, k) * self._numbers[k]
            cached = tuple(coeffs)
            self._polys[t] = cached
        return cached

    def poly_eval(self, t: int, x: RationalLike) -> Fraction:
        x = rat(x)
        acc = Fraction(0)
        for a in reversed(self.poly_coeffs(t)):
            acc = acc * x + a
        return acc


_CACHE = BernoulliCache()


def bernoulli_number(j: int) -> Fraction:
    return _CACHE.number(j)


def bernoulli_poly_eval(t: int, x: RationalLike) -> Fraction:
    return _CACHE.poly_eval(t, x)


def bernoulli_poly_coeffs(t: int) -> tuple[Fraction, ...]:
    return _CACHE.poly_coeffs(t)


def half_argument_check(t: int) -> bool:
    """True iff ``B_t(1/2) == (2**(1-t) - 1) * B_t`` exactly."""
    lhs = bernoulli_poly_eval(t, Fraction(1, 2))
    rhs = (Fraction(2) ** (1 - t) - 1) * bernoulli_number(t)
    return lhs == rhs


def reflection_check(t: int) -> bool:
    """True iff ``B_t(1) == (-1)**t * B_t`` exactly."""
    return bernoulli_poly_eval(t, 1) == (-1) ** t * bernoulli_number(t)
