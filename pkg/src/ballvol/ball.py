"""Exact volumes of the unit ball and the ratios built from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exact import PiExpression


@dataclass(frozen=True)
class OmegaValue:
    n: int
    value: PiExpression

    @property
    def coeff(self) -> Fraction:
        return self.value.coeff(self.n // 2)

    @property
    def pi_power(self) -> int:
        return self.n // 2

    def __str__(self):
        return str(self.value)


def _odd_double_factorial(m: int) -> int:
    # (2m+1)!! = (2m+1)! / (2^m m!)
    return factorial(2 * m + 1) // (factorial(m) << m)


@lru_cache(maxsize=None)
def omega_exact(n: int) -> OmegaValue:
    """``pi**(n/2) / Gamma(n/2 + 1)`` as ``q * pi**floor(n/2)``.

    Even ``n = 2m`` gives ``pi**m / m!``; odd ``n = 2m+1`` gives
    ``2**(m+1) pi**m / (2m+1)!!`` since ``Gamma(m + 3/2)`` carries the
    half-power of pi.
    """
    if n < 0:
        raise ValueError("dimension must be >= 0")
    m = n // 2
    if n % 2 == 0:
        q = Fraction(1, factorial(m))
    else:
        q = Fraction(2 ** (m + 1), _odd_double_factorial(m))
    return OmegaValue(n, PiExpression.monomial(q, m))


@lru_cache(maxsize=16384)
def ratio_exact(n: int) -> PiExpression:
    """``Omega_{n-1} / Omega_n``."""
    if n < 1:
        raise ValueError("ratio needs n >= 1")
    return omega_exact(n - 1).value / omega_exact(n).value


@lru_cache(maxsize=16384)
def geo_ratio_exact(n: int) -> PiExpression:
    """``Omega_n**2 / (Omega_{n-1} Omega_{n+1})``."""
    if n < 1:
        raise ValueError("ratio needs n >= 1")
    w = omega_exact(n).value
    return (w * w) / (omega_exact(n - 1).value * omega_exact(n + 1).value)


@lru_cache(maxsize=16384)
def sum_ratio_exact(n: int) -> tuple[PiExpression, PiExpression]:
    """Numerator and denominator of ``Omega_n / (Omega_{n-1} + Omega_{n+1})``."""
    if n < 1:
        raise ValueError("ratio needs n >= 1")
    return omega_exact(n).value, omega_exact(n - 1).value + omega_exact(n + 1).value
