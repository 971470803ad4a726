import random
from fractions import Fraction as F
from math import factorial

import mpmath
import pytest

from ballvol.ball import geo_ratio_exact, omega_exact, ratio_exact, sum_ratio_exact
from ballvol.evaluate import Quantity, target_quantity
from ballvol.exact import PiExpression


def pe(terms):
    return PiExpression(terms)


def test_omega_examples():
    assert omega_exact(0).value == pe({0: 1})
    assert omega_exact(3).value == pe({1: F(4, 3)})
    assert omega_exact(5).value == pe({2: F(8, 15)})
    assert omega_exact(4).value == pe({2: F(1, 2)})


def test_odd_closed_form_matches_factorial_ratio():
    for n in range(1, 400, 2):
        m = n // 2
        assert omega_exact(n).coeff == F(4 ** (m + 1) * factorial(m + 1), factorial(2 * m + 2))


def test_recurrence():
    two_pi = pe({1: 2})
    for n in range(2, 1001):
        assert omega_exact(n).value == omega_exact(n - 2).value * two_pi * F(1, n)


def test_single_positive_term():
    for n in range(0, 60):
        w = omega_exact(n)
        assert w.value.is_monomial()
        assert set(w.value.terms) == {n // 2}
        assert w.coeff > 0


@pytest.mark.parametrize("n", random.Random(7).sample(range(1, 3000), 20))
def test_agrees_with_gamma_function(n):
    # independent route: mpmath's Gamma at high precision, outside the interval engine
    with mpmath.workprec(400):
        ref = (mpmath.log(mpmath.pi) * n / 2 - mpmath.loggamma(mpmath.mpf(n) / 2 + 1)) / n
        enc = target_quantity(Quantity.LOG_OMEGA_PER_N, n, 256)
        assert abs(enc.mid - ref) < mpmath.mpf(2) ** -200


def test_ratio_examples():
    assert ratio_exact(1) == pe({0: F(1, 2)})
    assert ratio_exact(3) == pe({0: F(3, 4)})
    assert ratio_exact(4) == pe({-1: F(8, 3)})


def test_ratio_pi_exponent():
    for n in range(1, 50):
        assert set(ratio_exact(n).terms) <= {0, -1}


def test_geo_ratio_examples():
    assert geo_ratio_exact(1) == pe({-1: 4})
    assert geo_ratio_exact(2) == pe({1: F(3, 8)})
    w = {n: omega_exact(n).value for n in range(2, 5)}
    assert geo_ratio_exact(3) == w[3] * w[3] / (w[2] * w[4])
    assert geo_ratio_exact(3) == pe({-1: F(32, 9)})


def test_geo_ratio_exponent_parity():
    for n in range(1, 40):
        assert set(geo_ratio_exact(n).terms) == {1 if n % 2 == 0 else -1}


def test_geo_ratio_tends_to_one():
    enc = target_quantity(Quantity.GEO_RATIO, 10_000, 128)
    assert 1 < enc.lo and enc.hi < 1 + mpmath.mpf(10) ** -3


def test_sum_ratio_examples():
    assert sum_ratio_exact(1) == (pe({0: 2}), pe({0: 1, 1: 1}))
    assert sum_ratio_exact(2) == (pe({1: 1}), pe({0: 2, 1: F(4, 3)}))
    # equality case of the Alzer lower bound: 3 pi sqrt2 / ((4 pi + 6) sqrt 2)
    enc = target_quantity(Quantity.SUM_RATIO, 2, 256)
    with mpmath.workprec(300):
        ref = 3 * mpmath.pi / (4 * mpmath.pi + 6)
    assert enc.contains(ref)


def test_domain():
    with pytest.raises(ValueError):
        omega_exact(-1)
    with pytest.raises(ValueError):
        ratio_exact(0)
