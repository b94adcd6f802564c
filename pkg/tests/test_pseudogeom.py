import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from weylscope.pseudogeom import (
    AmbientSpace,
    CatalogError,
    DegenerateMetricError,
    MetricField,
    ParametricManifold,
    PlanarDomain,
    build,
    build_metric,
    curvature_tensor,
    default_ambient,
    egregium_check,
    hypersurface_data,
    lc_regular_check,
    lc_transversal_hypersurface_check,
    parse_target,
    q_orthonormal_frame,
    signature_at,
)

R21 = AmbientSpace(2, 1)
R30 = AmbientSpace(3, 0)


def test_ambient_forms():
    A = AmbientSpace(2, 2)
    assert A.dim == 4
    assert np.array_equal(A.eps, [1, 1, -1, -1])
    assert A.qform(np.array([1.0, 0, 1.0, 0])) == 0.0


def test_signature_and_kernel():
    p, q, k, ker = signature_at(np.diag([2.0, -1.0, 0.0]))
    assert (p, q, k) == (1, 1, 1)
    assert np.allclose(np.abs(ker[:, 0]), [0, 0, 1])


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_q_orthonormal_frame(p, q, seed):
    if p + q == 0:
        return
    A = AmbientSpace(p, q)
    V = np.random.default_rng(seed).normal(size=(p + q, p + q))
    E, eps = q_orthonormal_frame(V, A.Q)
    assert np.allclose(E.T @ A.Q @ E, np.diag(eps), atol=1e-9)
    assert sorted(eps.tolist()) == sorted(A.eps.tolist())


def test_parse_target_and_defaults():
    assert parse_target("torus:2,1,x") == ("torus", ["2", "1", "x"])
    assert default_ambient("disc:1") == AmbientSpace(1, 1)
    assert default_ambient("graph:saddle22") == AmbientSpace(2, 2)
    with pytest.raises(CatalogError):
        build("nosuch:1")
    with pytest.raises(CatalogError):
        build("sphere:-1")
    with pytest.raises(CatalogError):
        build("sphere:1", AmbientSpace(2, 2))
    with pytest.raises(CatalogError):
        build("torus:1,2")
    assert isinstance(build("annulus:1,2"), PlanarDomain)


def test_induced_metric_sphere():
    M = build("sphere:2", R30)
    g = M.induced_metric(np.array([0.7]), np.array([0.3]))[0]
    assert np.allclose(g, np.diag([4.0, 4.0 * math.sin(0.7) ** 2]))


@pytest.mark.parametrize("target,amb,K", [
    ("sphere:1", R30, 1.0),
    ("sphere:2", R30, 0.25),
    ("pseudosphere", R21, 1.0),
])
def test_constant_curvature(target, amb, K):
    M = build(target, amb)
    for u in zip(*M.sample_params(3)):
        k_int, k_ext = egregium_check(M, *u)
        g = np.linalg.det(M.induced_metric(*[np.array([x]) for x in u])[0])
        if abs(g) > 1e-6:
            assert k_int == pytest.approx(K, rel=1e-9)
            assert k_ext == pytest.approx(K, rel=1e-9)


@pytest.mark.parametrize("target,amb", [
    ("sphere:1", R21), ("ellipsoid:1,1.3,2.1", R21), ("torus:2,1,x", R21), ("graph:saddle", R21),
    ("graph:saddle22", AmbientSpace(2, 2)), ("cylinder:1,1", R21),
])
def test_egregium(target, amb):
    M = build(target, amb)
    rng = np.random.default_rng(1)
    dom = M.domain
    for _ in range(20):
        u = (dom.a1 + (dom.b1 - dom.a1) * rng.uniform(0.05, 0.95), dom.a2 + (dom.b2 - dom.a2) * rng.uniform(0.05, 0.95))
        G = M.induced_metric(*[np.array([x]) for x in u])[0]
        if abs(np.linalg.det(G)) < 1e-3:
            continue
        k_int, k_ext = egregium_check(M, *u)
        assert abs(k_int - k_ext) < 1e-8 * max(1.0, abs(k_ext))


def test_hyperbolic_metric_and_flat_torus():
    H = build_metric("metric:hyperbolic")
    assert curvature_tensor(H, 0.3, 1.1).gaussian_curvature == pytest.approx(-1.0, rel=1e-10)
    T = build_metric("metric:flattorus")
    assert abs(curvature_tensor(T, 1.0, 2.0).scalar) < 1e-14


def test_degenerate_metric_raises():
    g = build_metric("metric:lcreg")
    with pytest.raises(DegenerateMetricError):
        curvature_tensor(g, 0.2, 0.0)


def test_scalar_curvature_three_dim():
    # round S^3 of radius 1 in hyperspherical coordinates: scalar curvature 6
    a, b, c = sp.symbols("a b c", real=True)
    G = sp.diag(1, sp.sin(a) ** 2, sp.sin(a) ** 2 * sp.sin(b) ** 2)
    g = MetricField.from_sympy(G, (a, b, c), None, name="S3")
    assert curvature_tensor(g, 0.9, 1.2, 0.4).scalar == pytest.approx(6.0, rel=1e-10)


def test_hypersurface_data_ellipsoid_cap():
    M = build("ellipsoid:1,1,2", R21)
    # near the pole the normal is timelike and K_E = c^2 / (a^2 b^2)
    d = hypersurface_data(M, np.array([1e-3]), np.array([0.0]))
    assert d.sigma[0] == pytest.approx(-1.0, abs=1e-5)
    assert d.K_E[0] == pytest.approx(4.0, rel=1e-4)


def test_lc_regular_check_examples():
    ok = lc_regular_check(build_metric("metric:lcreg"))
    assert ok.regular and ok.min_margin == pytest.approx(1.0, rel=1e-6)
    bad = lc_regular_check(build_metric("metric:lcsing"))
    assert not bad.regular
    assert all(abs(v["u"][1]) < 1e-3 for v in bad.violations)
    assert bad.n_violations >= len(bad.violations)
    assert lc_regular_check(build_metric("metric:hyperbolic")).regular


def test_transversality_examples():
    assert lc_transversal_hypersurface_check(build("sphere:1", R21)).min_margin == pytest.approx(2.0, rel=1e-6)
    v = lc_transversal_hypersurface_check(build("graph:lightband", R21))
    assert not v.regular
    d = v.to_dict()
    assert set(d) >= {"regular", "min_margin", "violations", "tol"}


def test_transformed_preserves_metric():
    M = build("sphere:1", R21)
    t = 0.4
    A = np.array([[math.cos(t), -math.sin(t), 0], [math.sin(t), math.cos(t), 0], [0, 0, 1]])
    N = M.transformed(A)
    u = M.sample_params(3)
    assert np.allclose(M.induced_metric(*u), N.induced_metric(*u), atol=1e-12)
