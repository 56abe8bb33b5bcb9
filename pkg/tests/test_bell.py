"""Bell polynomials against series-expansion oracles.

The oracles expand exp(sum_i u_i t^i / i!) and exp(z * sum_i u_i t^i / i!)
directly with exact rational series arithmetic, independently of the
recursions in charlie.bell."""

from fractions import Fraction
from math import factorial

import pytest

from charlie import exactring as xr
from charlie.bell import bell_at_scaled_args, complete_bell, d_power_exp, incomplete_bell
from charlie.jetfield import apply_total_derivative

NMAX = 10


def _series_mul(a, b, nmax):
    out = [dict() for _ in range(nmax + 1)]
    for i, pa in enumerate(a):
        if not pa:
            continue
        for j, pb in enumerate(b):
            if i + j > nmax:
                break
            if pb:
                out[i + j] = xr.poly_add(out[i + j], xr.poly_mul(pa, pb))
    return out


def _exp_series(s, nmax):
    """exp(s) for a series with s[0] = 0, truncated at t^nmax."""
    out = [xr.poly_const(1)] + [dict() for _ in range(nmax)]
    term = out[:]  # s^m / m!
    term[0] = xr.poly_const(1)
    power = [xr.poly_const(1)] + [dict() for _ in range(nmax)]
    for m in range(1, nmax + 1):
        power = _series_mul(power, s, nmax)
        scaled = [xr.poly_scale(p, Fraction(1, factorial(m))) for p in power]
        out = [xr.poly_add(a, b) for a, b in zip(out, scaled)]
    return out


def _generator_series(nmax):
    s = [dict() for _ in range(nmax + 1)]
    for i in range(1, nmax + 1):
        s[i] = xr.poly_scale(xr.poly_var(i), Fraction(1, factorial(i)))
    return s


@pytest.fixture(scope="module")
def exp_series():
    return _exp_series(_generator_series(NMAX), NMAX)


def test_printed_first_bell_polynomials():
    assert complete_bell(0) == xr.poly_parse("1")
    assert complete_bell(1) == xr.poly_parse("u1")
    assert complete_bell(2) == xr.poly_parse("u1^2 + u2")
    assert complete_bell(3) == xr.poly_parse("u1^3 + 3*u1*u2 + u3")
    assert complete_bell(4) == xr.poly_parse("u1^4 + 6*u1^2*u2 + 4*u1*u3 + 3*u2^2 + u4")


def test_recursion_matches_generating_function(exp_series):
    for n in range(NMAX + 1):
        assert complete_bell(n) == xr.poly_scale(exp_series[n], factorial(n)), n


def test_incomplete_from_z_generating_function():
    # B_{n,k} = n! * [t^n] (S^k / k!) with S = sum u_i t^i/i!
    s = _generator_series(NMAX)
    power = [xr.poly_const(1)] + [dict() for _ in range(NMAX)]
    for k in range(1, NMAX + 1):
        power = _series_mul(power, s, NMAX)
        for n in range(k, NMAX + 1):
            expected = xr.poly_scale(power[n], Fraction(factorial(n), factorial(k)))
            assert incomplete_bell(n, k) == expected, (n, k)


def test_incomplete_extremes():
    assert incomplete_bell(5, 1) == xr.poly_parse("u5")
    assert incomplete_bell(4, 4) == xr.poly_parse("u1^4")


def test_incomplete_sum_is_complete():
    for n in range(1, NMAX + 1):
        acc = {}
        for k in range(1, n + 1):
            acc = xr.poly_add(acc, incomplete_bell(n, k))
        assert acc == complete_bell(n), n


def test_incomplete_bigraded():
    for n in range(1, 9):
        for k in range(1, n + 1):
            p = incomplete_bell(n, k)
            assert xr.weight_of(p) == n
            assert all(xr.mono_degree(m) == k for m in p)


def test_incomplete_range_errors():
    with pytest.raises(ValueError):
        incomplete_bell(3, 0)
    with pytest.raises(ValueError):
        incomplete_bell(3, 4)


def test_complete_homogeneous():
    for n in range(1, NMAX + 1):
        assert xr.weight_of(complete_bell(n)) == n


def test_d_power_exp_small():
    assert d_power_exp(0, 3) == xr.qp_parse("e^(3*u)")
    assert d_power_exp(2, 1) == xr.qp_parse("e^(u) * u1^2 + e^(u) * u2")
    assert d_power_exp(2, -2) == xr.qp_parse("4 * e^(-2*u) * u1^2 - 2 * e^(-2*u) * u2")


def test_d_power_exp_against_iterated_total_derivative():
    for lam in (-2, -1, 1, 2):
        acc = xr.qp_exp(lam)
        for k in range(NMAX + 1):
            assert d_power_exp(k, lam) == acc, (k, lam)
            acc = apply_total_derivative(acc)


def test_scaled_args_match_substitution():
    for lam in (-2, 3):
        for n in range(6):
            manual = xr.poly_substitute(
                complete_bell(n),
                {i: xr.poly_scale(xr.poly_var(i), lam) for i in range(1, n + 1)})
            assert bell_at_scaled_args(n, lam) == manual
