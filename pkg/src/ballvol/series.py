"""Exact coefficient families of the asymptotic series for ball volumes.

Every family is stored from index 0 (explicit zeros where the family starts
later) in a :class:`CoeffSeries`.  Expansion variable is ``1/n`` unless the
series says ``inv_n_plus_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bernoulli import bernoulli_number, bernoulli_poly_eval
from .exact import PiExpression, binomial_general

DEFAULT_COUNT = 12

SERIES_IDS = ("B_TAIL", "PSI", "MU", "C", "S", "LAMBDA", "D", "T",
              "T_SHIFT_MIXED", "T_SHIFT_FULL")

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CoeffSeries:
    id: str
    coeffs: tuple
    start_index: int = 0
    variable: str = "inv_n"

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]

    def rationals(self) -> list[Fraction]:
        return [c.as_rational() if isinstance(c, PiExpression) else c for c in self.coeffs]

    def truncated_value(self, n, upto: int):
        """Exact ``sum_{j <= upto} coeffs[j] / n**j`` (rational or PiExpression)."""
        total = Fraction(0)
        x = Fraction(1, n) if isinstance(n, int) else 1 / n
        for j in range(min(upto, len(self.coeffs) - 1), -1, -1):
            total = total * x + self.coeffs[j]
        return total


# truncated power series over Fractions; index = power of the variable

def ps_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


def ps_inv(a: Sequence[Fraction], order: int) -> list[Fraction]:
    if not a or a[0] == 0:
        raise ZeroDivisionError("series has no constant term to invert")
    out = [Fraction(0)] * (order + 1)
    out[0] = 1 / Fraction(a[0])
    for k in range(1, order + 1):
        acc = sum((a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out[k] = -acc * out[0]
    return out


def ps_div(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    return ps_mul(a, ps_inv(b, order), order)


def ps_compose(f: Sequence[Fraction], g: Sequence[Fraction], order: int) -> list[Fraction]:
    """``f(g(x))`` for ``g(0) == 0``."""
    if g and g[0] != 0:
        raise ValueError("inner series must vanish at 0")
    out = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for k, fk in enumerate(f[: order + 1]):
        if fk:
            for i in range(order + 1):
                out[i] += fk * power[i]
        power = ps_mul(power, g, order)
    return out


def log1p_scaled(h: Fraction, order: int) -> list[Fraction]:
    """Series of ``ln(1 + h x)``."""
    out = [Fraction(0)] * (order + 1)
    for j in range(1, order + 1):
        out[j] = Fraction((-1) ** (j + 1), j) * Fraction(h) ** j
    return out


def exp_transform(log_coeffs: Sequence[Fraction], count: int) -> list[Fraction]:
    """Coefficients ``e_0..e_count`` of ``exp(sum_{k>=1} g_k x**k)``.

    ``e_0 = 1`` and ``e_j = (1/j) sum_{k=1}^{j} k g_k e_{j-k}``;
    ``log_coeffs[k]`` is ``g_k`` (index 0 is ignored).
    """
    e = [Fraction(1)]
    for j in range(1, count + 1):
        acc = Fraction(0)
        for k in range(1, j + 1):
            g = log_coeffs[k] if k < len(log_coeffs) else 0
            if g:
                acc += k * g * e[j - k]
        e.append(acc / j)
    return e


def b_tail_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """``b_j = 2**(2j-2) B_{2j} / (j (2j-1))``: the tail of ``(1/n) ln Omega_n``
    is ``-sum b_j n**(-2j)``.  Stored by ``j`` (not by power of ``1/n``)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [Fraction(0)]
    for j in range(1, count + 1):
        out.append(Fraction(2) ** (2 * j - 2) * bernoulli_number(2 * j) / (j * (2 * j - 1)))
    return CoeffSeries("B_TAIL", tuple(out), start_index=1)


def _mu_weight(k: int) -> Fraction:
    # (-1)^k [B_{k+1}(1/2) - B_{k+1}(1)] 2^k
    return (-1) ** k * (bernoulli_poly_eval(k + 1, HALF) - bernoulli_poly_eval(k + 1, 1)) * 2 ** k


def _lambda_weight(k: int) -> Fraction:
    # (-1)^k [2B_{k+1}(1) - B_{k+1}(1/2) - B_{k+1}(3/2)] 2^k
    return (-1) ** k * (
        2 * bernoulli_poly_eval(k + 1, 1)
        - bernoulli_poly_eval(k + 1, HALF)
        - bernoulli_poly_eval(k + 1, Fraction(3, 2))
    ) * 2 ** k


def mu_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [Fraction(0)] + [_mu_weight(j) / (j * (j + 1)) for j in range(1, count + 1)]
    return CoeffSeries("MU", tuple(out), start_index=1)


def lambda_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    if count < 1:
        raise ValueError("count must be >= 1")
    out = [Fraction(0)] + [_lambda_weight(j) / (j * (j + 1)) for j in range(1, count + 1)]
    return CoeffSeries("LAMBDA", tuple(out), start_index=1)


def _weighted_recursion(weight, count: int) -> list[Fraction]:
    out = [Fraction(1)]
    for j in range(1, count + 1):
        acc = sum((weight(k) / (k + 1) * out[j - k] for k in range(1, j + 1)), Fraction(0))
        out.append(acc / j)
    return out


def c_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """``Omega_{n-1}/Omega_n = sqrt(n/2pi) * sum c_j n**(-j)``."""
    if count < 0:
        raise ValueError("count must be >= 0")
    return CoeffSeries("C", tuple(_weighted_recursion(_mu_weight, count)))


def d_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """``Omega_n**2 / (Omega_{n-1} Omega_{n+1}) = sum d_j n**(-j)``."""
    if count < 0:
        raise ValueError("count must be >= 0")
    return CoeffSeries("D", tuple(_weighted_recursion(_lambda_weight, count)))


def c_squared(count: int = DEFAULT_COUNT) -> list[Fraction]:
    """Cauchy square of the ``c`` family up to index ``count``."""
    c = c_coeffs(count).coeffs
    return [sum((c[k] * c[m - k] for k in range(m + 1)), Fraction(0)) for m in range(count + 1)]


def s_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """``(Omega_{n-1}/Omega_n)**2 = (n + 1/2)/(2pi) + sum s_j n**(-j)``.

    ``s_j = (1/2pi) sum_{k=0}^{j+1} c_k c_{j+1-k}``; index 0 holds the
    regrouped constant ``1/(4pi)``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    sq = c_squared(count + 1)
    if sq[0] != 1 or sq[1] != HALF:
        raise ArithmeticError("squared c-series does not regroup to (n + 1/2)/(2 pi)")
    inv_two_pi = PiExpression.monomial(Fraction(1, 2), -1)
    out = [inv_two_pi * sq[1]] + [inv_two_pi * sq[j + 1] for j in range(1, count + 1)]
    return CoeffSeries("S", tuple(out), start_index=1)


def t_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """Exponent series with ``G(n) ~ (1 + 1/n)**(sum t_j n**(-j))``.

    Forward substitution in ``sum_{j=1}^{m} (-1)**(j+1) t_{m-j} / j = lambda_m``.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    lam = lambda_coeffs(count + 1).coeffs
    t: list[Fraction] = []
    for m in range(1, count + 2):
        rest = sum((Fraction((-1) ** (j + 1), j) * t[m - j] for j in range(2, m + 1)), Fraction(0))
        t.append(lam[m] - rest)
    return CoeffSeries("T", tuple(t))


def t_system_residuals(t: CoeffSeries, lam: CoeffSeries, upto: int) -> list[Fraction]:
    return [
        sum((Fraction((-1) ** (j + 1), j) * t[m - j] for j in range(1, m + 1)), Fraction(0)) - lam[m]
        for m in range(1, upto + 1)
    ]


def tail_reexpand(s: int, order: int) -> list[Fraction]:
    """Coefficients of ``n**(-2s) - (n+1)**(-2s)`` in powers of ``1/n`` up to ``order``."""
    if s < 1 or order < 0:
        raise ValueError("need s >= 1 and order >= 0")
    out = [Fraction(0)] * (order + 1)
    for k in range(1, order - 2 * s + 1):
        out[2 * s + k] = (-1) ** (k + 1) * binomial_general(2 * s - 1 + k, k)
    return out


def psi_coeffs(count: int = DEFAULT_COUNT) -> CoeffSeries:
    """``psi_m = sum_{k,s>=1, k+2s=m} (-1)**(k+1) C(2s-1+k, k) b_s``.

    ``(1/n) ln Omega_n - (1/(n+1)) ln Omega_{n+1} ~ Psi(n) - sum psi_m n**(-m)``.
    """
    if count < 3:
        raise ValueError("count must be >= 3")
    b = b_tail_coeffs(count // 2 + 1).coeffs
    out = [Fraction(0)] * (count + 1)
    for m in range(3, count + 1):
        acc = Fraction(0)
        for s in range(1, (m - 1) // 2 + 1):
            k = m - 2 * s
            acc += (-1) ** (k + 1) * binomial_general(2 * s - 1 + k, k) * b[s]
        out[m] = acc
    return CoeffSeries("PSI", tuple(out), start_index=3)


def shift_exponent_series(t: CoeffSeries, count: int, shift: int = 1) -> tuple[CoeffSeries, CoeffSeries]:
    """Rewrite ``(1+1/n)**T(n)`` as ``(1 + 1/(n+shift))**E``.

    Returns ``E`` expanded in ``1/n`` (``T_SHIFT_MIXED``) and in
    ``1/(n+shift)`` (``T_SHIFT_FULL``).  Solves ``E * ln(1 + 1/(n+shift)) = Lambda``
    order by order, with ``Lambda = T * ln(1 + 1/n)`` rebuilt from ``t``.
    """
    if len(t.coeffs) < count + 1:
        raise ValueError("t series too short for the requested count")
    order = count + 1
    h = Fraction(shift)
    lam = ps_mul(list(t.coeffs), log1p_scaled(Fraction(1), order), order)

    # in x = 1/n: ln(1 + 1/(n+h)) = ln(1 + (h+1)x) - ln(1 + hx)
    base_x = [a - b for a, b in zip(log1p_scaled(h + 1, order), log1p_scaled(h, order))]
    mixed = ps_div(lam[1:], base_x[1:], count)

    # in y = 1/(n+h): x = y / (1 - h y)
    x_of_y = [Fraction(0)] + [h ** (k - 1) for k in range(1, order + 1)]
    lam_y = ps_compose(lam, x_of_y, order)
    full = ps_div(lam_y[1:], log1p_scaled(Fraction(1), order)[1:], count)

    return (CoeffSeries("T_SHIFT_MIXED", tuple(mixed)),
            CoeffSeries("T_SHIFT_FULL", tuple(full), variable="inv_n_plus_1"))


def get_series(series_id: str, count: int = DEFAULT_COUNT) -> CoeffSeries | tuple[CoeffSeries, CoeffSeries]:
    sid = series_id.upper()
    table = {
        "B": b_tail_coeffs, "B_TAIL": b_tail_coeffs, "MU": mu_coeffs, "C": c_coeffs,
        "S": s_coeffs, "LAMBDA": lambda_coeffs, "D": d_coeffs, "T": t_coeffs,
        "PSI": psi_coeffs,
    }
    if sid in table:
        return table[sid](count)
    if sid in ("TSHIFT", "T_SHIFT"):
        return shift_exponent_series(t_coeffs(count + 1), count)
    raise KeyError(f"unknown series {series_id!r}")
