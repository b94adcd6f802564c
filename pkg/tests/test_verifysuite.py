import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from weylscope.homdist import chi
from weylscope.verifysuite import (
    GaussPoly2D,
    IdentityCase,
    PoleOfConstantError,
    cases_to_csv,
    cases_to_json,
    default_test_functions,
    j_pointwise,
    pushforward_line,
    run_table_suite,
    verify_j_frozen,
    verify_j_identity,
    verify_weyl_lemma,
    weyl_constant,
)


@pytest.mark.parametrize("t", [0.0, 0.4, math.pi / 4, 1.3, math.pi / 2])
def test_pushforward_line_against_double_integral(t):
    phi = default_test_functions()[1]
    g = pushforward_line(phi, t)
    c, s = math.cos(t) ** 2, math.sin(t) ** 2

    def f(x):
        return np.cos(0.7 * x) + x * np.exp(-x * x)

    lhs = integrate.quad(lambda x: (f(x) * g(x)).real, -25, 25, limit=200)[0]
    rhs = integrate.dblquad(lambda r, sg: (f(sg * c + r * s) * phi(sg, r)).real, -10, 10, -10, 10,
                            epsabs=1e-11)[0]
    assert lhs == pytest.approx(rhs, abs=1e-8)


def test_j_identity_example():
    case = verify_j_identity(1, 0, 1)
    assert case.passed and case.error < 1e-10
    assert case.details["fubini_gap"] < 1e-12


@given(st.integers(0, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m))), st.integers(0, 1))
@settings(max_examples=10, deadline=None)
def test_j_identity_property(ma, i):
    m, a = ma
    for phi in default_test_functions():
        assert verify_j_identity(m, a, i, phi).passed


def test_j_error_decreases_with_t_grid():
    phi = default_test_functions()[1]
    errs = [verify_j_identity(3, 1, 0, phi, grid=n, check_swap=False, tol=1.0).abs_error for n in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    order = math.log2(errs[1] / errs[2])
    assert order >= 1


def test_j_rejects_bad_parameters():
    with pytest.raises(ValueError):
        verify_j_identity(1, 2, 0)


def test_j_pointwise_reference_value():
    assert j_pointwise(1, 0, chi(1, -1.5), 1.0, -1.0) == pytest.approx(1.0, abs=1e-10)


def test_j_pointwise_smooth_matches_quadrature():
    # away from the singular level the integral is ordinary
    d = chi(0, -2.5)
    val = j_pointwise(3, 1, d, 0.5, 2.0)
    ref = integrate.quad(lambda t: (0.5 * math.cos(t) ** 2 + 2 * math.sin(t) ** 2) ** -2.5
                         * math.sin(t) * math.cos(t) ** 2, 0, math.pi / 2)[0]
    assert val == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("sigma", [-1.0, -0.5, 0.5, 1.0])
def test_frozen_rho(sigma):
    for m in range(5):
        for a in range(m + 1):
            for i in (0, 1):
                assert verify_j_frozen(m, a, i, sigma).passed


def test_weyl_examples():
    assert abs(verify_weyl_lemma(1, 1, 2, 0).lhs) < 1e-10
    case = verify_weyl_lemma(2, 1, 0, 1)
    assert case.rhs == pytest.approx(4 * math.pi) and case.passed
    for h in (1, 3):
        c = verify_weyl_lemma(2, 2, h, 0)
        assert c.lhs == 0 and c.rhs == 0 and c.passed


def test_weyl_constant_is_sphere_moment():
    # c(n, 0) is the area of S^{n-1}
    assert weyl_constant(3, 0) == pytest.approx(4 * math.pi)
    assert weyl_constant(2, 0) == pytest.approx(2 * math.pi)
    assert weyl_constant(3, 1) == 0.0


@given(st.integers(0, 6).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))),
       st.integers(0, 4), st.integers(0, 1))
@settings(max_examples=60, deadline=None)
def test_weyl_property(pn, h, i):
    p, q = pn[0], pn[1] - pn[0]
    if p + q < 2:
        with pytest.raises(PoleOfConstantError):
            verify_weyl_lemma(p, q, h, i)
        return
    case = verify_weyl_lemma(p, q, h, i)
    assert case.passed
    if case.details["structural_zero"]:
        assert case.abs_error < 1e-10


def test_weyl_riemannian_case_against_sphere_cubature():
    # q = 0: the integral is the plain moment of y_1^h over S^{p-1}
    rng = np.random.default_rng(0)
    y = rng.normal(size=(400_000, 3))
    y /= np.linalg.norm(y, axis=1)[:, None]
    mc = 4 * math.pi * np.mean(y[:, 0] ** 2)
    assert verify_weyl_lemma(3, 0, 2, 0).lhs.real == pytest.approx(mc, rel=1e-2)


def test_table_suite_all_pass():
    cases = run_table_suite()
    kinds = [c.identity for c in cases]
    assert kinds.count("residue") == 6 and kinds.count("fourier_duality") == 8
    assert kinds.count("chi_eval") == 8 and kinds.count("double_fourier") == 14
    assert all(c.passed for c in cases)


def test_identity_case_serialization():
    c = IdentityCase("J", {"m": 1}, "gauss", 1e-6, 1.0 + 0j, 1.0 + 1e-9j)
    assert c.passed
    doc = json.loads(cases_to_json([c], config={"k": 1}))
    assert doc["n_pass"] == 1 and doc["cases"][0]["pass"] is True
    assert cases_to_json([c]) == cases_to_json([c])
    rows = cases_to_csv([c]).splitlines()
    assert rows[0].startswith("identity,params") and rows[1].startswith("J,m=1")


def test_gausspoly2d_validation():
    with pytest.raises(ValueError):
        GaussPoly2D([[1.0]], 0.0, 1.0)
    phi = GaussPoly2D([[1.0, 2.0]], 1.0, 1.0)
    assert phi(0.0, 1.0) == pytest.approx(3.0 * math.exp(-1.0))
