"""Certified interval evaluation of ball-volume quantities.

All arithmetic goes through an mpmath interval context (outward rounding on
every operation).  Exact inputs enter as ``num/den`` quotients of point
intervals; ``ln`` of a rational is ``ln(num) - ln(den)``.  Nothing here ever
touches a floating Gamma function.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .ball import geo_ratio_exact, omega_exact, ratio_exact, sum_ratio_exact
from .exact import PiExpression

DEFAULT_PREC = 128
PREC_CAP = 4096


class DomainError(ArithmeticError):
    """A bound is undefined at this n (``indeterminate`` when the offending
    radicand or log argument merely encloses zero at the working precision)."""

    def __init__(self, message: str, indeterminate: bool = False):
        super().__init__(message)
        self.indeterminate = indeterminate


class Quantity(str, enum.Enum):
    OMEGA = "OMEGA"
    LOG_OMEGA_PER_N = "LOG_OMEGA_PER_N"
    LOG_OMEGA_DIFF = "LOG_OMEGA_DIFF"
    LOG_RATIO = "LOG_RATIO"
    RATIO = "RATIO"
    SUM_RATIO = "SUM_RATIO"
    GEO_RATIO = "GEO_RATIO"
    GEO_LOG = "GEO_LOG"


def _mpf(raw) -> mpmath.mpf:
    return mpmath.mp.make_mpf(raw)


@dataclass(frozen=True)
class PrecInterval:
    lo: mpmath.mpf
    hi: mpmath.mpf
    prec_bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    @classmethod
    def from_iv(cls, x, prec_bits: int) -> "PrecInterval":
        a, b = x._mpi_
        return cls(_mpf(a), _mpf(b), prec_bits)

    @property
    def width(self) -> mpmath.mpf:
        with mpmath.workprec(max(self.prec_bits, 53) + 10):
            return self.hi - self.lo

    @property
    def mid(self) -> mpmath.mpf:
        with mpmath.workprec(max(self.prec_bits, 53) + 10):
            return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "PrecInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def sign(self) -> int | None:
        """+1 / -1 when certified, ``None`` when the enclosure meets zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def render(self, digits: int = 30) -> str:
        """Decimal text carrying only digits both endpoints agree on."""
        return render_interval(self.lo, self.hi, digits)

    def __str__(self):
        return f"[{mpmath.nstr(self.lo, 20)}, {mpmath.nstr(self.hi, 20)}]"


def render_interval(lo, hi, digits: int = 30) -> str:
    if lo == hi:
        return mpmath.nstr(lo, digits)
    for d in range(digits, 0, -1):
        a, b = mpmath.nstr(lo, d), mpmath.nstr(hi, d)
        if a == b:
            return a
    return f"[{mpmath.nstr(lo, 6)}, {mpmath.nstr(hi, 6)}]"


class Evaluator:
    """Interval toolbox at a fixed working precision.

    One private mpmath interval context per evaluator, so evaluators at
    different precisions (or in different threads) never share state.
    """

    def __init__(self, prec_bits: int = DEFAULT_PREC):
        self.prec = prec_bits
        self.ctx = MPIntervalContext()
        self.ctx.prec = prec_bits
        c = self.ctx
        self.pi = c.pi + 0
        self.e = c.e + 0
        self.ln2 = c.log(c.mpf(2))
        self.ln3 = c.log(c.mpf(3))
        self.lnpi = c.log(self.pi)
        self._cache: dict = {}

    # exact inputs

    def q(self, value: Union[int, Fraction]):
        value = Fraction(value)
        c = self.ctx
        if value.denominator == 1:
            return c.mpf(value.numerator)
        return c.mpf(value.numerator) / c.mpf(value.denominator)

    def pi_expr(self, expr: PiExpression):
        return expr.evaluate(self.ctx)

    # elementary functions with domain checks

    def ln(self, x):
        a, b = x._mpi_
        if _mpf(b) <= 0:
            raise DomainError("log argument is not positive")
        if _mpf(a) <= 0:
            raise DomainError("log argument encloses zero", indeterminate=True)
        return self.ctx.log(x)

    def ln_rational(self, value: Union[int, Fraction]):
        value = Fraction(value)
        if value <= 0:
            raise DomainError("log of a non-positive rational")
        c = self.ctx
        out = c.log(c.mpf(value.numerator))
        if value.denominator != 1:
            out = out - c.log(c.mpf(value.denominator))
        return out

    def ln_monomial(self, expr: PiExpression):
        """``ln(q * pi**k)`` for a single-term positive PiExpression."""
        if not expr.is_monomial():
            raise ValueError("ln_monomial needs a single pi-term")
        (k, q), = expr
        out = self.ln_rational(q)
        if k:
            out = out + k * self.lnpi
        return out

    def exp(self, x):
        return self.ctx.exp(x)

    def sqrt(self, x):
        a, b = x._mpi_
        if _mpf(b) < 0:
            raise DomainError("negative radicand")
        if _mpf(a) < 0:
            raise DomainError("radicand encloses zero", indeterminate=True)
        return self.ctx.sqrt(x)

    def powr(self, base, exponent):
        """``base**exponent`` as ``exp(exponent * ln(base))``."""
        return self.exp(exponent * self.ln(base))

    # target quantities

    def log_omega(self, n: int):
        key = ("log_omega", n)
        if key not in self._cache:
            self._cache[key] = self.ln_monomial(omega_exact(n).value)
        return self._cache[key]

    def quantity(self, quantity: "Quantity | str", n: int):
        quantity = Quantity(quantity)
        if n < 1:
            raise ValueError(f"{quantity.value} needs n >= 1")
        key = (quantity, n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if quantity is Quantity.OMEGA:
            out = self.pi_expr(omega_exact(n).value)
        elif quantity is Quantity.LOG_OMEGA_PER_N:
            out = self.log_omega(n) / n
        elif quantity is Quantity.LOG_OMEGA_DIFF:
            out = self.log_omega(n) / n - self.log_omega(n + 1) / (n + 1)
        elif quantity is Quantity.LOG_RATIO:
            out = self.ln_monomial(ratio_exact(n))
        elif quantity is Quantity.RATIO:
            out = self.pi_expr(ratio_exact(n))
        elif quantity is Quantity.SUM_RATIO:
            num, den = sum_ratio_exact(n)
            # divide through by Omega_n so the interval quotient stays O(1)
            out = 1 / self.pi_expr(den / num)
        elif quantity is Quantity.GEO_RATIO:
            out = self.pi_expr(geo_ratio_exact(n))
        else:
            out = self.ln_monomial(geo_ratio_exact(n))
        self._cache[key] = out
        return out


_local = threading.local()


def evaluator(prec_bits: int = DEFAULT_PREC) -> Evaluator:
    """Per-thread memoized :class:`Evaluator` for ``prec_bits``."""
    pool = getattr(_local, "pool", None)
    if pool is None:
        pool = _local.pool = {}
    ev = pool.get(prec_bits)
    if ev is None:
        ev = pool[prec_bits] = Evaluator(prec_bits)
    elif len(ev._cache) > 200_000:
        ev._cache.clear()
    return ev


Expr = Union[Quantity, str, Callable[[Evaluator, int], object]]


def enclose(expr: Expr, n: int, prec_bits: int = DEFAULT_PREC) -> PrecInterval:
    """Certified enclosure of a quantity (or a bound side ``f(ev, n)``) at ``n``."""
    ev = evaluator(prec_bits)
    if callable(expr):
        x = expr(ev, n)
    else:
        x = ev.quantity(expr, n)
    return PrecInterval.from_iv(ev.ctx.mpf(x), prec_bits)


def target_quantity(quantity: Quantity | str, n: int, prec_bits: int = DEFAULT_PREC) -> PrecInterval:
    return enclose(Quantity(quantity), n, prec_bits)
