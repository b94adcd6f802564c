import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from weylscope.homdist import (
    Bump,
    GaussPoly,
    HomDistribution,
    MeromorphicFamily,
    NonconvergentTailError,
    NotAPoleError,
    PoleError,
    PowerProduct,
    SmoothnessError,
    abs_power,
    chi,
    chi_eval_pm1,
    chi_fourier_alpha,
    delta,
    fourier,
    fourier_duality_check,
    regularized_pair,
    residue,
    residue_numeric_check,
    sign_power,
    subtraction_depth,
    x_minus,
    x_plus,
    x_power,
)
from weylscope.homdist.testfunc import TestFunction1D as _Plain
from weylscope.specfun import HalfInteger

HALF = [-0.5, -1.5, -2.5, -3.5]


def gauss_moment(s, k, a):
    """<x_+^s, x^k exp(-a x^2)> by analytic continuation."""
    z = (s + k + 1) / 2
    return 0.5 * special.gamma(z) * a ** (-z)


# construction ---------------------------------------------------------------


def test_chi_conventions():
    assert chi(0, -1.5) == x_plus(-1.5)
    assert chi(1, -1.5) == x_minus(-1.5, -1.0)
    assert chi(1, -0.5) == x_minus(-0.5, 1.0)
    assert chi(0, -1) == x_power(-1)
    assert chi(1, -1) == delta(0, math.pi)
    assert chi(1, -2) == delta(1, -math.pi)
    assert chi(3, -0.5) == chi(1, -0.5)


def test_chi_needs_negative_exponent():
    with pytest.raises(ValueError):
        chi(0, 0.5)


def test_pole_combinations_rejected():
    with pytest.raises(PoleError):
        x_plus(-1)
    with pytest.raises(PoleError):
        abs_power(-1)
    sign_power(-1)
    abs_power(-2)


@pytest.mark.parametrize("i,s,sign,val", [
    (0, -0.5, 1, 1), (1, -0.5, 1, 0), (0, -0.5, -1, 0), (1, -0.5, -1, 1),
    (1, -1.5, -1, -1), (0, -1, -1, -1), (0, -2, -1, 1), (1, -1, -1, 0),
])
def test_chi_eval_pm1(i, s, sign, val):
    assert chi_eval_pm1(i, s, sign) == val
    # agrees with pointwise evaluation of the power part
    assert complex(chi(i, s)(np.array([float(sign)]))[0]) == pytest.approx(val)


def test_json_roundtrip_and_arithmetic():
    d = chi(1, -2.5) + 2.0 * chi(0, -1) + delta(3, 1j)
    assert HomDistribution.from_json(d.to_json()) == d
    assert (d - d).is_zero()
    assert d.reflect().reflect() == d


# pairing ---------------------------------------------------------------------


@pytest.mark.parametrize("s", [-0.5, -1.5, -2.5, -3.5, -4.5, 0.5])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_pair_x_plus_against_gaussian_moments(s, k):
    coeffs = [0.0] * k + [1.0]
    phi = GaussPoly(coeffs, 0.7)
    assert regularized_pair(x_plus(s), phi) == pytest.approx(gauss_moment(s, k, 0.7), rel=1e-10)


@pytest.mark.parametrize("n", [-1, -2, -3, -4])
def test_pair_integer_powers(n):
    # x^n against x^k exp(-x^2): only parity-matched k survive
    for k in range(3):
        phi = GaussPoly([0.0] * k + [1.0], 1.0)
        expected = 0.0 if (n + k) % 2 else 2 * gauss_moment(n, k, 1.0)
        assert regularized_pair(x_power(n), phi) == pytest.approx(expected, abs=1e-10)


def test_pair_delta():
    phi = GaussPoly([1.0, 2.0, 3.0], 0.5)
    # phi'(0) = 2, phi''(0) = 2*3 - 1 = 5
    assert regularized_pair(delta(0), phi) == pytest.approx(1.0)
    assert regularized_pair(delta(1), phi) == pytest.approx(-2.0)
    assert regularized_pair(delta(2), phi) == pytest.approx(5.0)


def test_pair_power_product_matches_quad():
    f = PowerProduct(1.3, -1.0, 0.5, 2.0, -0.5)
    ref = integrate.quad(lambda x: f(x).real * x ** -0.5, 0, 2, limit=200)[0]
    assert regularized_pair(x_plus(-0.5), f) == pytest.approx(ref, rel=1e-8)
    assert f.mass() == pytest.approx(integrate.quad(lambda x: f(x).real, -1, 2, limit=200)[0], rel=1e-8)


def test_pairing_is_linear_and_local():
    phi = GaussPoly([1.0, -0.4, 0.2], 0.6)
    d1, d2 = chi(0, -2.5), chi(1, -1.5)
    lhs = regularized_pair(2 * d1 + d2, phi)
    assert lhs == pytest.approx(2 * regularized_pair(d1, phi) + regularized_pair(d2, phi), rel=1e-12)
    # bump away from 0 sees the ordinary function
    b = Bump(2.0, 0.5)
    ref = integrate.quad(lambda x: b(x).real * x ** -2.5, 1.5, 2.5)[0]
    assert regularized_pair(d1, b) == pytest.approx(ref, rel=1e-9)


def test_pairing_errors():
    slow = _Plain(lambda x: 1.0 / (1.0 + x * x), order=4)
    with pytest.raises(NonconvergentTailError):
        regularized_pair(x_plus(-0.5), slow)
    b = Bump(0.0, 1.0)
    with pytest.raises(SmoothnessError):
        regularized_pair(delta(10), b)


def test_subtraction_depth():
    assert subtraction_depth(-0.5) == 1
    assert subtraction_depth(-2.5) == 3
    assert subtraction_depth(0.5) == 0


@given(st.sampled_from(HALF), st.floats(0.3, 3.0))
@settings(max_examples=25, deadline=None)
def test_homogeneity_under_dilation(s, lam):
    # dilate gives phi(x/lam)/lam, so the pairing scales by lam^s
    phi = GaussPoly([1.0, 0.3, 0.1], 0.5)
    d = chi(1, s) + chi(0, s)
    lhs = regularized_pair(d, phi.dilate(lam))
    assert lhs == pytest.approx(lam ** s * regularized_pair(d, phi), rel=1e-9)


# residues ---------------------------------------------------------------------


def test_residue_table():
    assert residue(MeromorphicFamily("x_plus"), -1) == delta(0)
    assert residue(MeromorphicFamily("x_plus"), -2) == delta(1, -1.0)
    assert residue(MeromorphicFamily("x_minus"), -2) == delta(1, 1.0)
    assert residue(MeromorphicFamily("abs"), -1) == delta(0, 2.0)
    with pytest.raises(NotAPoleError):
        residue(MeromorphicFamily("abs"), -2)


@pytest.mark.parametrize("name,at", [("x_plus", -1), ("x_minus", -2), ("sign", -2), ("abs", -3)])
def test_residue_numeric(name, at):
    phi = GaussPoly([1.0, 0.5, -0.25, 0.125], 0.5)
    assert residue_numeric_check(MeromorphicFamily(name), at, phi) < 1e-8


# Fourier -------------------------------------------------------------------


def test_fourier_of_delta_and_pv():
    assert fourier(delta(0)) == x_power(0)
    # F(x^-1) = -i pi sign(xi)
    assert fourier(x_power(-1)).allclose(sign_power(0, -1j * math.pi))


@pytest.mark.parametrize("s", HALF + [-1.0, -2.0, -3.0])
@pytest.mark.parametrize("i", [0, 1])
def test_fourier_duality(s, i):
    phi = GaussPoly([1.0, 0.5, -0.25], 0.5)
    assert fourier_duality_check(chi(i, s), phi) < 1e-9


@pytest.mark.parametrize("s", HALF)
@pytest.mark.parametrize("i", [0, 1])
def test_fourier_alpha_coefficient(s, i):
    # coefficient of xi_+^{-s-1} in F(chi_i^s)
    F = fourier(chi(i, s))
    e = HalfInteger.of(-s - 1)
    plus = [t.coeff for t in F.power_terms if t.side == "plus" and t.exponent == e]
    assert plus[0] == pytest.approx(chi_fourier_alpha(i, s), rel=1e-13)
    # closed form pi / Gamma(-s) e^{i pi s/2} i^i
    assert chi_fourier_alpha(i, s) == pytest.approx(
        math.pi / special.gamma(-s) * np.exp(1j * math.pi * s / 2) * 1j ** i, rel=1e-13)


@pytest.mark.parametrize("s", HALF + [-1.0, -2.0, -3.0])
def test_double_fourier_reflection(s):
    for i in (0, 1):
        d = chi(i, s)
        assert fourier(fourier(d)).allclose(d.reflect() * (2 * math.pi))


def test_gausspoly_fourier_numeric():
    phi = GaussPoly([1.0, 0.3, -0.2], 0.8)
    F = phi.fourier()
    for xi in (0.0, 0.7, -1.3):
        ref = integrate.quad(lambda x: (phi(x) * np.exp(-1j * xi * x)).real, -30, 30)[0]
        ref += 1j * integrate.quad(lambda x: (phi(x) * np.exp(-1j * xi * x)).imag, -30, 30)[0]
        assert complex(F(np.array([xi]))[0]) == pytest.approx(ref, abs=1e-10)
