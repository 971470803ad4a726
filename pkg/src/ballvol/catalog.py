"""Two-sided inequalities for ball volumes, as declarative bound cases.

Each side is a function ``(ev, n) -> interval`` built from exact rational or
pi-polynomial coefficients; polynomials in ``1/n`` are summed exactly as
Fractions and only then turned into intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction as F
from typing import Callable, Optional, Sequence

from .evaluate import Evaluator, Quantity
from .exact import PiExpression

Side = Callable[[Evaluator, int], object]


@dataclass(frozen=True)
class BoundCase:
    id: str
    quantity: Quantity
    lower: Optional[Side]
    upper: Optional[Side]
    lower_from: Optional[int]
    upper_from: Optional[int]
    source: str
    lower_strict: bool = True
    upper_strict: bool = True
    variants: dict = field(default_factory=dict)
    variant: Optional[str] = None
    # (side, n) pairs where the bound is attained exactly
    equality_points: tuple = ()
    # side names whose in-range failures are a recorded discrepancy, not a violation
    audit_sides: tuple = ()
    # variant to rescan when an audited side fails
    audit_alternate: Optional[str] = None

    def with_variant(self, name: str | None) -> "BoundCase":
        if name is None:
            return self
        key = name.lower()
        if key not in self.variants:
            raise KeyError(f"case {self.id} has no variant {name!r}; known: {sorted(self.variants)}")
        lower, upper = self.variants[key]
        return replace(self, lower=lower, upper=upper, variant=key)

    @property
    def label(self) -> str:
        return f"{self.id}:{self.variant}" if self.variant else self.id

    def side(self, name: str) -> Optional[Side]:
        return self.lower if name == "lower" else self.upper

    def claimed_from(self, name: str) -> Optional[int]:
        return self.lower_from if name == "lower" else self.upper_from


def inv_poly(n: int, coeffs: Sequence[F]) -> F:
    """Exact ``sum coeffs[j] / n**j``."""
    x = F(1, n)
    acc = F(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def stirling_head(ev: Evaluator, n: int):
    # -(n+1)/(2n) ln(n/2) + (1/2) ln(pi e) - ln(2 pi)/(2n)
    return (
        -ev.q(F(n + 1, 2 * n)) * (ev.ln_rational(n) - ev.ln2)
        + (ev.lnpi + 1) / 2
        - (ev.ln2 + ev.lnpi) / (2 * n)
    )


def psi_head(ev: Evaluator, n: int):
    return (
        -ev.q(F(n + 1, 2 * n)) * ev.ln_rational(F(n, 2))
        + ev.q(F(n + 2, 2 * n + 2)) * ev.ln_rational(F(n + 1, 2))
        - (ev.ln2 + ev.lnpi) / (2 * n * (n + 1))
    )


def _chen_lin_form(ev: Evaluator, n: int, shift):
    # (2 pi e / n)**(n/2) / sqrt(pi (n + shift))
    log_power = ev.q(F(n, 2)) * (ev.ln2 + ev.lnpi + 1 - ev.ln_rational(n))
    return ev.exp(log_power) / ev.sqrt(ev.pi * (n + shift))


# --- new bounds -------------------------------------------------------------

MU_POLY = [F(0), F(0), F(1, 6), F(0), F(-1, 45), F(0), F(8, 315), F(0), F(-8, 105)]
AB_TAIL_PRINTED = F(1, 128)
AB_TAIL_CLOSED = F(128, 297)


def _ab_mu(n):
    return inv_poly(n, MU_POLY)


def _ab_lambda(n, tail):
    return _ab_mu(n) + tail / F(n) ** 10


def ab_alpha(ev, n, tail=AB_TAIL_PRINTED):
    return stirling_head(ev, n) - ev.q(_ab_lambda(n, tail))


def ab_beta(ev, n):
    return stirling_head(ev, n) - ev.q(_ab_mu(n))


def _theta(n):
    return F(1, 3) + F(1, 18 * n) - F(31, 810 * n * n)


def _nu(n):
    return _theta(n) - F(139, 9720 * n ** 3)


PSI_LOWER = [F(0), F(0), F(0), F(-1, 3)]
PSI_UPPER = [F(0), F(0), F(0), F(-1, 3), F(1, 2)]

RATIO_A = [F(0), F(1, 4), F(0), F(-1, 24), F(0), F(1, 20), F(0), F(-17, 112)]
RATIO_B = RATIO_A + [F(0), F(31, 36)]

CD_C = [F(1), F(1, 4), F(1, 32), F(-5, 128), F(-21, 2048), F(399, 8192)]
CD_D = CD_C + [F(869, 65536)]

# (n + 1/2)/(2 pi) + (1/pi)(1/(16n) - 1/(32n^2) [- 5/(256 n^3)])
SQRT_LOWER = [F(0), F(1, 16), F(-1, 32), F(-5, 256)]
SQRT_UPPER = [F(0), F(1, 16), F(-1, 32)]

# pi-polynomial numerators of eps_1 (n^-3) and the eps_2 increment (n^-4)
EPS1_NUM = PiExpression({1: F(-1, 4), 2: 4, 3: -8})
EPS2_INC_NUM = PiExpression({1: F(3, 8), 2: -7, 3: -12, 4: 64})

PQ_P = [F(0), F(1, 2), F(-1, 2), F(5, 12), F(-1, 4), F(1, 10), F(-1, 6)]
PQ_Q = PQ_P[:-1] + [F(0)]

RS_R = [F(1), F(1, 2), F(-3, 8), F(3, 16)]
RS_S = RS_R + [F(3, 128)]

OO_LOWER = [F(1, 2), F(-1, 4), F(1, 8)]
OO_UPPER = OO_LOWER + [F(1, 48)]


def eps1(n: int) -> PiExpression:
    return EPS1_NUM * F(1, n ** 3)


def eps2(n: int) -> PiExpression:
    return eps1(n) + EPS2_INC_NUM * F(1, n ** 4)


def _o6_side(eps):
    def side(ev, n):
        return ev.sqrt(2 * ev.pi / (n + 4 * ev.pi + ev.q(F(1, 2))) + ev.pi_expr(eps(n)))
    return side


def _sqrt_side(coeffs):
    def side(ev, n):
        radicand = PiExpression.monomial(F(2 * n + 1, 4) + inv_poly(n, coeffs), -1)
        return ev.sqrt(ev.pi_expr(radicand))
    return side


def _ratio_series_side(coeffs):
    def side(ev, n):
        return ev.sqrt(ev.q(n) / (2 * ev.pi)) * ev.q(inv_poly(n, coeffs))
    return side


def _log_ratio_side(coeffs):
    def side(ev, n):
        return (ev.ln_rational(n) - ev.ln2 - ev.lnpi) / 2 + ev.q(inv_poly(n, coeffs))
    return side


def _power_of_one_plus(exponent_of_n: Callable[[Evaluator, int], object], shift: int = 0):
    # (1 + 1/(n+shift))**E(n)
    def side(ev, n):
        return ev.exp(exponent_of_n(ev, n) * ev.ln_rational(F(n + shift + 1, n + shift)))
    return side


def _oo_side(coeffs):
    return _power_of_one_plus(lambda ev, n: ev.q(inv_poly(n, coeffs)))


def _const_side(value):
    return lambda ev, n: ev.q(value(n))


# --- classical bounds -------------------------------------------------------

def _borg_side(shift):
    def side(ev, n):
        return ev.sqrt((n + shift(ev)) / (2 * ev.pi))
    return side


def _alzer_star(ev):
    return 3 * ev.pi * ev.sqrt(ev.q(2)) / (4 * ev.pi + 6)


def _chen_sum_side(shift):
    def side(ev, n):
        return ev.sqrt(2 * ev.pi / (n + shift(ev)))
    return side


def chen_geo_mu(ev):
    return (2 * ev.ln2 - ev.lnpi) / (2 * ev.ln3 - 3 * ev.ln2)


def chen_pow_beta(ev):
    return (2 * ev.ln2 - ev.lnpi) / (ev.ln3 - ev.ln2)


def alzer_pow_alpha(ev):
    return 2 - ev.lnpi / ev.ln2


def _chen_geo_base(n):
    return 1 + F(1, 2 * n) - F(3, 8 * n * n)


def _build_catalog() -> dict[str, BoundCase]:
    cases = [
        BoundCase(
            "NEW_AB", Quantity.LOG_OMEGA_PER_N,
            lambda ev, n: ab_alpha(ev, n, AB_TAIL_PRINTED), ab_beta, 1, 1,
            "alpha(n) < (1/n) ln Omega_n < beta(n); tail 1/(128 n^10) as printed",
            variants={
                "printed": (lambda ev, n: ab_alpha(ev, n, AB_TAIL_PRINTED), ab_beta),
                "closed": (lambda ev, n: ab_alpha(ev, n, AB_TAIL_CLOSED), ab_beta),
            },
            variant="printed",
            audit_sides=("lower",),
            audit_alternate="closed",
        ),
        BoundCase(
            "NEW_33", Quantity.OMEGA,
            lambda ev, n: _chen_lin_form(ev, n, ev.q(_theta(n))),
            lambda ev, n: _chen_lin_form(ev, n, ev.q(_nu(n))),
            3, 1, "theta(n) = 1/3 + 1/(18n) - 31/(810n^2), nu = theta - 139/(9720n^3)",
        ),
        BoundCase(
            "NEW_PSI", Quantity.LOG_OMEGA_DIFF,
            lambda ev, n: psi_head(ev, n) + ev.q(inv_poly(n, PSI_LOWER)),
            lambda ev, n: psi_head(ev, n) + ev.q(inv_poly(n, PSI_UPPER)),
            1, 1, "Psi(n) - 1/(3n^3) < difference < Psi(n) - 1/(3n^3) + 1/(2n^4)",
        ),
        BoundCase(
            "NEW_AB_RATIO", Quantity.LOG_RATIO,
            _log_ratio_side(RATIO_A), _log_ratio_side(RATIO_B), 1, 1,
            "a(n) < ln(Omega_{n-1}/Omega_n) < a(n) + 31/(36n^9)",
        ),
        BoundCase(
            "NEW_CD", Quantity.RATIO,
            _ratio_series_side(CD_C), _ratio_series_side(CD_D), 12, 1,
            "sqrt(n/2pi) c(n) < Omega_{n-1}/Omega_n < sqrt(n/2pi) d(n)",
        ),
        BoundCase(
            "NEW_SQRT", Quantity.RATIO,
            _sqrt_side(SQRT_LOWER), _sqrt_side(SQRT_UPPER), 1, 2,
            "truncations of (n+1/2)/(2pi) + sum s_j/n^j under a square root",
        ),
        BoundCase(
            "NEW_O6", Quantity.SUM_RATIO,
            _o6_side(eps1), _o6_side(eps2), 1, 1,
            "sqrt(2pi/(n+4pi+1/2) + eps_1(n)) < Omega_n/(Omega_{n-1}+Omega_{n+1}) < ... + eps_2(n)",
            audit_sides=("lower",),
        ),
        BoundCase(
            "NEW_PQ", Quantity.GEO_LOG,
            _const_side(lambda n: inv_poly(n, PQ_P)), _const_side(lambda n: inv_poly(n, PQ_Q)), 1, 1,
            "p(n) < ln(Omega_n^2/(Omega_{n-1}Omega_{n+1})) < p(n) + 1/(6n^6)",
        ),
        BoundCase(
            "NEW_RS", Quantity.GEO_RATIO,
            _const_side(lambda n: inv_poly(n, RS_R)), _const_side(lambda n: inv_poly(n, RS_S)), 6, 1,
            "r(n) < Omega_n^2/(Omega_{n-1}Omega_{n+1}) < r(n) + 3/(128n^4)",
        ),
        BoundCase(
            "NEW_OO", Quantity.GEO_RATIO,
            _oo_side(OO_LOWER), _oo_side(OO_UPPER), 5, 1,
            "(1+1/n)^(1/2 - 1/(4n) + 1/(8n^2) [+ 1/(48n^3)])",
        ),
        BoundCase(
            "CL_CHEN_OMEGA", Quantity.OMEGA,
            lambda ev, n: _chen_lin_form(ev, n, ev.e / 2 - 1),
            lambda ev, n: _chen_lin_form(ev, n, ev.q(F(1, 3))),
            1, 1, "Chen-Lin: a = e/2 - 1, b = 1/3",
            lower_strict=False, equality_points=(("lower", 1),),
        ),
        BoundCase(
            "CL_BORG_ALZ_QV", Quantity.RATIO,
            _borg_side(lambda ev: ev.q(F(1, 2))), _borg_side(lambda ev: ev.pi / 2 - 1), 1, 1,
            "Borgwardt (a=0, b=1); Alzer, Qiu-Vuorinen (a=1/2, b=pi/2-1)",
            lower_strict=False, upper_strict=False,
            variants={
                "borgwardt": (_borg_side(lambda ev: ev.q(0)), _borg_side(lambda ev: ev.q(1))),
                "alzer_qv": (_borg_side(lambda ev: ev.q(F(1, 2))), _borg_side(lambda ev: ev.pi / 2 - 1)),
            },
            variant="alzer_qv",
            equality_points=(("upper", 1),),
        ),
        BoundCase(
            "CL_ALZ_SUM", Quantity.SUM_RATIO,
            lambda ev, n: _alzer_star(ev) / ev.sqrt(ev.q(n)),
            lambda ev, n: ev.sqrt(2 * ev.pi / n),
            1, 1, "Alzer: alpha* = 3 pi sqrt2/(4pi+6), beta* = sqrt(2pi)",
            lower_strict=False, equality_points=(("lower", 2),),
        ),
        BoundCase(
            "CL_CHEN_SUM", Quantity.SUM_RATIO,
            _chen_sum_side(lambda ev: ev.pi * (1 + ev.pi) ** 2 / 2 - 1),
            _chen_sum_side(lambda ev: ev.q(F(1, 2)) + 4 * ev.pi),
            1, 1, "Chen-Lin: a = pi(1+pi)^2/2 - 1, b = 1/2 + 4pi",
            lower_strict=False, equality_points=(("lower", 1),),
        ),
        BoundCase(
            "CL_CHEN_GEO", Quantity.GEO_RATIO,
            lambda ev, n: ev.q(_chen_geo_base(n)),
            lambda ev, n: ev.powr(ev.q(_chen_geo_base(n)), chen_geo_mu(ev)),
            1, 1, "Chen-Lin: lambda = 1, mu = (2ln2 - ln pi)/(2ln3 - 3ln2)",
            upper_strict=False, equality_points=(("upper", 1),),
        ),
        BoundCase(
            "CL_AND_KR", Quantity.GEO_RATIO,
            lambda ev, n: ev.q(1), lambda ev, n: ev.q(1 + F(1, n)),
            1, 1, "Anderson et al.; Klain-Rota: 1 < G < 1 + 1/n",
        ),
        BoundCase(
            "CL_ALZ_POW", Quantity.GEO_RATIO,
            _power_of_one_plus(lambda ev, n: alzer_pow_alpha(ev)),
            _power_of_one_plus(lambda ev, n: ev.q(F(1, 2))),
            1, 1, "Alzer: alpha = 2 - log2(pi), beta = 1/2",
            lower_strict=False, equality_points=(("lower", 1),),
        ),
        BoundCase(
            "CL_MERKLE", Quantity.GEO_RATIO,
            _power_of_one_plus(lambda ev, n: ev.q(F(1, 2)), shift=1), None,
            1, None, "Merkle: (1 + 1/(n+1))^(1/2) < G",
        ),
        BoundCase(
            "CL_CHEN_POW", Quantity.GEO_RATIO,
            _power_of_one_plus(lambda ev, n: ev.q(F(1, 2)), shift=1),
            _power_of_one_plus(lambda ev, n: chen_pow_beta(ev), shift=1),
            1, 1, "Chen-Lin: alpha = 1/2, beta = (2ln2 - ln pi)/(ln3 - ln2)",
            upper_strict=False, equality_points=(("upper", 1),),
        ),
    ]
    return {c.id: c for c in cases}


_CATALOG = _build_catalog()


def bound_catalog() -> list[BoundCase]:
    return list(_CATALOG.values())


def get_case(case_id: str) -> BoundCase:
    """Look up ``ID`` or ``ID:VARIANT`` (case-insensitive)."""
    name, _, variant = case_id.partition(":")
    key = name.strip().upper()
    if key not in _CATALOG:
        raise KeyError(f"unknown case {case_id!r}")
    return _CATALOG[key].with_variant(variant or None)
