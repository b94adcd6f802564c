import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from weylscope.specfun import (
    GammaPoleError,
    HalfInteger,
    ball_volume,
    beta,
    cos_quarter,
    eighth_root,
    gamma,
    i_pow,
    rgamma,
    sin_quarter,
    sine_integral_S,
    sphere_area,
)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.5, 7.0, -0.5, -1.5, -3.5])
def test_gamma_matches_scipy(z):
    assert gamma(z) == pytest.approx(special.gamma(z), rel=1e-13)


def test_gamma_complex():
    z = 0.3 + 1.2j
    assert abs(gamma(z) - special.gamma(z)) < 1e-13 * abs(special.gamma(z))


@pytest.mark.parametrize("n", [0, -1, -4])
def test_gamma_poles(n):
    with pytest.raises(GammaPoleError):
        gamma(n)
    assert rgamma(n) == 0.0


def test_beta_and_S():
    assert beta(0.5, 0.5) == pytest.approx(math.pi)
    # S(0, 1) = int cos = 1, S(1, 1) = 1/2
    assert sine_integral_S(0, 1) == pytest.approx(1.0)
    assert sine_integral_S(1, 1) == pytest.approx(0.5)
    assert sine_integral_S(0, 0) == pytest.approx(math.pi / 2)


@given(st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=40, deadline=None)
def test_S_symmetric_and_quadrature(a, b):
    assert sine_integral_S(a, b) == pytest.approx(sine_integral_S(b, a), rel=1e-14)
    t, w = np.polynomial.legendre.leggauss(60)
    t = (t + 1) * math.pi / 4
    val = np.sum(w * np.sin(t) ** a * np.cos(t) ** b) * math.pi / 4
    assert sine_integral_S(a, b) == pytest.approx(val, rel=1e-12)


def test_ball_and_sphere():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert sphere_area(0) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(4 * math.pi)


def test_half_integer_exactness():
    s = HalfInteger.of(-1.5)
    assert s.twice == -3 and not s.is_integer
    assert HalfInteger.of(-2).is_integer
    with pytest.raises(ValueError):
        HalfInteger.of(0.3)


@given(st.integers(-40, 40))
def test_i_pow_and_eighth_root(n):
    assert abs(i_pow(n) - 1j ** (n % 4)) < 1e-15
    assert abs(eighth_root(n) - np.exp(1j * math.pi * n / 4)) < 1e-14


@given(st.integers(-20, 20))
def test_quarter_trig(twice):
    s = HalfInteger(twice)
    assert cos_quarter(s) == pytest.approx(math.cos(math.pi * s.value / 2), abs=1e-14)
    assert sin_quarter(s) == pytest.approx(math.sin(math.pi * s.value / 2), abs=1e-14)
