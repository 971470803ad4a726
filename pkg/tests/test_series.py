from fractions import Fraction as F

import mpmath
import pytest

from ballvol.evaluate import evaluator
from ballvol.exact import PiExpression
from ballvol.harness import truncation_error
from ballvol.series import (b_tail_coeffs, c_coeffs, c_squared, d_coeffs, exp_transform,
                            lambda_coeffs, mu_coeffs, ps_mul, psi_coeffs, s_coeffs,
                            shift_exponent_series, t_coeffs, t_system_residuals, tail_reexpand)


def brute_inverse_power(power, order):
    """(1 + x)**(-power) by repeated multiplication of the geometric series."""
    geo = [F((-1) ** k) for k in range(order + 1)]
    out = [F(1)] + [F(0)] * order
    for _ in range(power):
        out = ps_mul(out, geo, order)
    return out


def brute_psi(order):
    """Subtract two truncated copies of the b-tail: sum b_s [n^-2s - (n+1)^-2s]."""
    b = b_tail_coeffs(order).coeffs
    out = [F(0)] * (order + 1)
    for s in range(1, order // 2 + 1):
        shifted = brute_inverse_power(2 * s, order)
        out[2 * s] += b[s]
        for k, c in enumerate(shifted):
            if 2 * s + k <= order:
                out[2 * s + k] -= b[s] * c
    return out


def test_b_tail():
    b = b_tail_coeffs(5)
    assert b[1] == F(1, 6)
    assert b[3] == F(8, 315)
    assert b[5] == F(128, 297)
    assert list(b.coeffs[1:5]) == [F(1, 6), F(-1, 45), F(8, 315), F(-8, 105)]


def test_mu():
    mu = mu_coeffs(12)
    assert mu[1] == F(1, 4)
    assert mu[2] == 0
    assert mu[9] == F(31, 36)
    assert all(mu[2 * k] == 0 for k in range(1, 7))


def test_mu_parity_matches_bernoulli_number_route():
    # B_t(1) = (-1)^t B_t and B_t(1/2) = (2^(1-t) - 1) B_t give mu_j in B_{j+1} alone
    from ballvol.bernoulli import bernoulli_number
    mu = mu_coeffs(12)
    for j in range(1, 13):
        t = j + 1
        alt = (-1) ** j * ((F(2) ** (1 - t) - 1) - (-1) ** t) * bernoulli_number(t) * 2 ** j / (j * (j + 1))
        assert mu[j] == alt


def test_exp_transform():
    mu, lam = mu_coeffs(12), lambda_coeffs(12)
    assert exp_transform(mu.coeffs, 6) == [1, F(1, 4), F(1, 32), F(-5, 128), F(-21, 2048),
                                           F(399, 8192), F(869, 65536)]
    assert exp_transform(lam.coeffs, 4) == [1, F(1, 2), F(-3, 8), F(3, 16), F(3, 128)]
    assert exp_transform([0] * 5, 4) == [1, 0, 0, 0, 0]
    assert exp_transform(mu.coeffs, 12) == list(c_coeffs(12).coeffs)
    assert exp_transform(lam.coeffs, 12) == list(d_coeffs(12).coeffs)


def test_c_and_d():
    c = c_coeffs(6)
    assert (c[2], c[3], c[6]) == (F(1, 32), F(-5, 128), F(869, 65536))
    d = d_coeffs(4)
    assert (d[0], d[1], d[2], d[4]) == (1, F(1, 2), F(-3, 8), F(3, 128))


def test_s():
    s = s_coeffs(10)
    assert s[1] == PiExpression({-1: F(1, 16)})
    assert s[3] == PiExpression({-1: F(-5, 256)})
    assert s[7] == PiExpression({-1: F(-5165, 65536)})
    assert all(set(x.terms) == {-1} for x in s.coeffs if not x.is_zero())
    sq = c_squared(11)
    for j in range(1, 11):
        assert (s[j] * PiExpression({1: 2})).as_rational() == sq[j + 1]
    # constant regrouping: 1/(4pi) * 2pi = 1/2
    assert (s[0] * PiExpression({1: 2})).as_rational() == F(1, 2)


def test_lambda():
    lam = lambda_coeffs(6)
    assert list(lam.coeffs[1:]) == [F(1, 2), F(-1, 2), F(5, 12), F(-1, 4), F(1, 10), F(-1, 6)]


def test_t():
    t = t_coeffs(12)
    assert list(t.coeffs[:4]) == [F(1, 2), F(-1, 4), F(1, 8), F(1, 48)]
    assert t_system_residuals(t, lambda_coeffs(13), 12) == [0] * 12


def test_psi():
    psi = psi_coeffs(12)
    assert (psi[1], psi[2]) == (0, 0)
    assert list(psi.coeffs[3:7]) == [F(1, 3), F(-1, 2), F(26, 45), F(-11, 18)]
    assert list(psi.coeffs) == brute_psi(12)


def test_tail_reexpand():
    one = tail_reexpand(1, 6)
    assert one[3] == 2 and one[4] == -3
    assert tail_reexpand(2, 6)[5] == 4
    for s in (1, 2, 3):
        brute = brute_inverse_power(2 * s, 10)
        expected = [F(0)] * 13
        for k in range(1, 13 - 2 * s):
            expected[2 * s + k] = -brute[k]
        assert tail_reexpand(s, 12) == expected


def test_shift():
    mixed, full = shift_exponent_series(t_coeffs(8), 4)
    assert list(mixed.coeffs) == [F(1, 2), F(1, 4), F(-3, 8), F(23, 48), F(-15, 32)]
    assert list(full.coeffs) == [F(1, 2), F(1, 4), F(-1, 8), F(-1, 48), F(3, 32)]
    assert full.variable == "inv_n_plus_1"
    same_m, same_f = shift_exponent_series(t_coeffs(8), 6, shift=0)
    assert same_m.coeffs == same_f.coeffs == t_coeffs(6).coeffs


def test_shift_numerically():
    # (1 + 1/(n+1))^E(n) must track the exact ratio far better than the base variant
    mixed, full = shift_exponent_series(t_coeffs(12), 10)
    ev = evaluator(256)
    n = 300
    target = ev.quantity("GEO_LOG", n)
    base = ev.ln_rational(F(n + 2, n + 1))
    e_mixed = ev.q(mixed.truncated_value(n, 10))
    e_full = ev.q(full.truncated_value(n + 1, 10))
    for e in (e_mixed, e_full):
        err = abs(e * base - target)
        assert err.b < mpmath.mpf(n) ** -11


@pytest.mark.parametrize("family", ["MU", "C", "LAMBDA", "D"])
@pytest.mark.parametrize("trunc", [4, 6])
def test_truncation_within_envelope(family, trunc):
    series = {"MU": mu_coeffs, "C": c_coeffs, "LAMBDA": lambda_coeffs, "D": d_coeffs}[family](trunc + 4)
    omitted = next(c for c in series.coeffs[trunc + 1:] if c != 0)
    j = series.coeffs.index(omitted, trunc + 1)
    n = 200
    err = abs(truncation_error(family, trunc, evaluator(256), n))
    assert err.b < 10 * mpmath.mpf(abs(omitted).numerator) / abs(omitted).denominator / mpmath.mpf(n) ** j
