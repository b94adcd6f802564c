import math

import numpy as np
import pytest
from scipy import integrate

from weylscope.homdist import chi, delta, x_minus, x_plus
from weylscope.pushforward import (
    DegenerateFieldError,
    DensityOnDomain,
    Domain1D,
    Domain2D,
    GridConfig,
    ScalarFieldOnDomain,
    SingularityExcludedError,
    coarea_profile,
    pair_profile,
)
from weylscope.quadrature import gauss_legendre, integrate as adaptive

SQUARE = Domain2D(-1.0, 1.0, -1.0, 1.0)
ONE = DensityOnDomain(lambda *u: np.ones_like(np.asarray(u[0], dtype=float)))


def linear_field(shift=0.3):
    return ScalarFieldOnDomain(SQUARE, lambda u, v: u + shift,
                               lambda u, v: (np.ones_like(u), np.zeros_like(v)))


def radial_field(r0=0.25):
    return ScalarFieldOnDomain(SQUARE, lambda u, v: u * u + v * v - r0, lambda u, v: (2 * u, 2 * v))


def test_linear_profile_is_segment_length():
    h = coarea_profile(linear_field(), ONE, GridConfig(resolution=256, tsamples=128))
    inner = (h.t > -0.6) & (h.t < 1.2)
    assert np.allclose(h.h[inner], 2.0, atol=1e-8)
    assert h.margin == pytest.approx(1.0)


def test_linear_profile_pairings():
    h = coarea_profile(linear_field(), ONE, GridConfig(resolution=256, tsamples=128))
    assert pair_profile(x_plus(-0.5), h) == pytest.approx(4 * math.sqrt(1.3), rel=1e-7)
    assert pair_profile(x_minus(-0.5), h) == pytest.approx(4 * math.sqrt(0.7), rel=1e-7)
    assert pair_profile(delta(0), h) == pytest.approx(2.0, rel=1e-8)


def test_radial_profile_finite_part():
    h = coarea_profile(radial_field(), ONE, GridConfig(resolution=512, tsamples=256))
    inner = (h.t > -0.2) & (h.t < 0.7)
    assert np.allclose(h.h[inner], math.pi, rtol=1e-4)
    # FP int_0^{1/4} t^{-3/2} dt = -4, times the constant profile pi
    val, err = pair_profile(x_minus(-1.5), h, with_error=True)
    assert val == pytest.approx(-4 * math.pi, rel=1e-5)
    assert abs(val + 4 * math.pi) <= err < 1e-3


def test_one_dimensional_profile():
    dom = Domain1D(0.0, 2 * math.pi, periodic=True)
    sig = ScalarFieldOnDomain(dom, np.cos, lambda s: -np.sin(s))
    h = coarea_profile(sig, ONE, GridConfig(resolution=512, tsamples=256))
    ref = integrate.quad(lambda t: 2 * t ** -0.5 / math.sqrt(1 - t * t), 0, 1, limit=200)[0]
    assert pair_profile(x_plus(-0.5), h) == pytest.approx(ref, rel=1e-7)
    assert pair_profile(chi(1, -1), h) == pytest.approx(math.pi * 2.0, rel=1e-7)


def test_degenerate_field_raises():
    sig = ScalarFieldOnDomain(SQUARE, lambda u, v: u * u - 0.0 * v, lambda u, v: (2 * u, 0 * v))
    with pytest.raises((DegenerateFieldError, SingularityExcludedError)):
        h = coarea_profile(sig, ONE, GridConfig(resolution=128, tsamples=64))
        pair_profile(x_plus(-1.5), h)


def test_zero_at_edge_of_range():
    sig = ScalarFieldOnDomain(SQUARE, lambda u, v: u * u + v * v + 0.0, lambda u, v: (2 * u, 2 * v))
    with pytest.raises((DegenerateFieldError, SingularityExcludedError)):
        h = coarea_profile(sig, ONE, GridConfig(resolution=128, tsamples=64))
        pair_profile(x_plus(-1.5), h)


def test_constant_field_uses_domain_integral():
    sig = ScalarFieldOnDomain(SQUARE, lambda u, v: 0 * u + 2.0, lambda u, v: (0 * u, 0 * v))
    h = coarea_profile(sig, ONE)
    assert pair_profile(x_plus(-0.5), h) == pytest.approx(4.0 / math.sqrt(2.0), rel=1e-12)


def test_bad_gradient_oracle_rejected():
    with pytest.raises(ValueError):
        ScalarFieldOnDomain(SQUARE, lambda u, v: u, lambda u, v: (2 * np.ones_like(u), 0 * v))


def test_profile_csv(tmp_path):
    h = coarea_profile(linear_field(), ONE, GridConfig(resolution=64, tsamples=32))
    p = tmp_path / "h.csv"
    h.to_csv(p)
    rows = p.read_text().splitlines()
    assert rows[0] == "t,re_h,im_h" and len(rows) == len(h.t) + 1


@pytest.mark.parametrize("n", [5, 64, 150, 1001])
def test_gauss_legendre_exact_for_polynomials(n):
    x, w = gauss_legendre(n, 0.0, 2.0)
    assert np.sum(w) == pytest.approx(2.0, rel=1e-14)
    assert np.sum(w * x ** 9) == pytest.approx(2.0 ** 10 / 10, rel=1e-13)
    if n > 100:
        ref = np.polynomial.legendre.leggauss(n)[0]
        assert np.allclose((x - 1.0), ref, atol=1e-13)


def test_adaptive_integrate_singular_and_infinite():
    v, e = adaptive(lambda x: x ** -0.5, 0.0, 1.0)
    assert v == pytest.approx(2.0, rel=1e-9)
    v, _ = adaptive(lambda x: np.exp(-x * x), -np.inf, np.inf)
    assert v == pytest.approx(math.sqrt(math.pi), rel=1e-10)
