import json
import math
from fractions import Fraction

import numpy as np
import pytest

from weylscope.lkmeasures import (
    LKError,
    LKReport,
    NoMembershipTestError,
    NonSimpleZeroError,
    TransversalityError,
    TubeSpec,
    UnboundedTubeError,
    boundary_curves,
    euler_intersection_m11,
    gauss_bonnet_hypersurface,
    gb_distribution,
    kappa_density,
    lk_integral,
    perturb_curve,
    scaling_check,
    sqrt_lambda_power,
    tube_volume_formula,
    tube_volume_oracle,
)
from weylscope.pseudogeom import AmbientSpace, build, build_metric
from weylscope.pushforward import GridConfig

R21, R30, R11 = AmbientSpace(2, 1), AmbientSpace(3, 0), AmbientSpace(1, 1)


def test_gb_distribution_real_part_r21():
    d = gb_distribution(2, 1)
    vals = d(np.array([-1.0, -0.25, 0.5]))
    assert vals[0].real == pytest.approx(-1 / (2 * math.pi))
    assert vals[1].real == pytest.approx(-8 / (2 * math.pi))
    assert abs(vals[2].real) < 1e-15


def test_kappa_sphere_and_integrals():
    S = build("sphere:1", R30)
    assert kappa_density(S, 0, 0.7, 0.2) == pytest.approx(math.sin(0.7) / (2 * math.pi), rel=1e-12)
    assert lk_integral(S, 0).real == pytest.approx(2.0, rel=1e-10)
    assert lk_integral(S, 2).real == pytest.approx(4 * math.pi, rel=1e-10)
    assert kappa_density(S, 1, 0.7, 0.2) == 0


def test_kappa_pseudosphere_and_flat():
    P = build("pseudosphere", R21)
    assert kappa_density(P, 0, 0.3, 1.0) == pytest.approx(1j * math.cosh(0.3) / (2 * math.pi), rel=1e-12)
    T = build_metric("metric:flattorus")
    assert abs(lk_integral(T, 0)) < 1e-14


def test_segment_lengths():
    seg = build("segment:timelike,2", R21)
    assert lk_integral(seg, 1) == pytest.approx(2j, rel=1e-12)
    seg = build("segment:spacelike,1", R11)
    assert lk_integral(seg, 1) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("lam", [4.0, 9.0, -1.0])
@pytest.mark.parametrize("target,amb,k", [("sphere:1", R21, 0), ("sphere:1", R21, 2), ("graph:saddle", R21, 0),
                                           ("segment:timelike,1", R21, 1)])
def test_scaling(target, amb, k, lam):
    assert scaling_check(build(target, amb), lam, k) < 1e-8


def test_sqrt_lambda_power_branch():
    assert sqrt_lambda_power(4.0, 3) == pytest.approx(8.0)
    assert sqrt_lambda_power(-1.0, 1) == pytest.approx(1j)
    assert sqrt_lambda_power(-4.0, 2) == pytest.approx(-4.0)


def test_gauss_bonnet_low_resolution():
    rep = gauss_bonnet_hypersurface(build("sphere:1", R21), GridConfig(resolution=512, tsamples=256), tol=5e-2)
    assert rep.passed and abs(rep.value.real - 2.0) < 5e-2
    d = json.loads(rep.to_json())
    assert d["value"]["re"] == pytest.approx(rep.value.real)
    assert d["verdict"] == "pass" and d["ambient"] == [2, 1]


def test_gauss_bonnet_riemannian_is_exact():
    rep = gauss_bonnet_hypersurface(build("sphere:1", R30), GridConfig(resolution=128, tsamples=64))
    assert rep.value.real == pytest.approx(2.0, abs=1e-8)


def test_gauss_bonnet_preconditions():
    with pytest.raises(TransversalityError) as exc:
        gauss_bonnet_hypersurface(build("graph:lightband", R21), GridConfig(128, 64))
    assert exc.value.margin is not None and exc.value.margin < 1e-3
    with pytest.raises(LKError):
        gauss_bonnet_hypersurface(build("circle:1", R21))


def test_m11_disc_and_annulus():
    chi, cr = euler_intersection_m11(build("disc:1"))
    assert chi == Fraction(1) and len(cr) == 4 and all(c["sign"] == 1 for c in cr)
    chi, cr = euler_intersection_m11(build("annulus:1,2"))
    assert chi == 0 and len(cr) == 8


def test_m11_perturbation_invariance():
    for target, expected in (("disc:1", 1), ("annulus:1,2", 0)):
        dom = build(target)
        curves = [perturb_curve(c, 0.1 * R / 9, phase=0.3 * k) for k, (c, (R, _)) in
                  enumerate(zip(boundary_curves(dom), dom.boundary))]
        assert euler_intersection_m11(curves)[0] == expected


def test_m11_margin_threshold():
    # disc crossings have |sigma'| = 2; a larger threshold flags them as non-simple
    with pytest.raises(NonSimpleZeroError):
        euler_intersection_m11(build("disc:1"), margin_threshold=10.0)


def test_tube_formulas_closed_form():
    spec = TubeSpec(build("segment:timelike,2", R21), 0.1)
    assert tube_volume_formula(spec) == pytest.approx(math.pi * 2 * 0.01, rel=1e-12)
    spec = TubeSpec(build("segment:spacelike,1", R11), 0.5)
    assert tube_volume_formula(spec) == pytest.approx(2 * 0.5, rel=1e-12)
    spec = TubeSpec(build("circle:1", R30), 0.1)
    assert tube_volume_formula(spec) == pytest.approx(2 * math.pi ** 2 * 0.01, rel=1e-12)


def test_tube_oracle_small_sample_is_seeded():
    spec = TubeSpec(build("segment:timelike,2", R21), 0.1)
    a = tube_volume_oracle(spec, samples=200_000, seed=7)
    b = tube_volume_oracle(spec, samples=200_000, seed=7)
    assert a == b
    assert abs(a[0] - tube_volume_formula(spec)) < 5 * a[1]


def test_tube_errors():
    with pytest.raises(UnboundedTubeError):
        tube_volume_formula(TubeSpec(build("segment:spacelike,1", AmbientSpace(2, 1)), 0.1))
    with pytest.raises(NoMembershipTestError):
        tube_volume_oracle(TubeSpec(build("circle:1", AmbientSpace(2, 1)), 0.1), samples=10)
    with pytest.raises(ValueError):
        TubeSpec(build("circle:1", R30), -1.0)


def test_report_json_is_deterministic():
    r = LKReport("x", 0, 2 + 0j, 1e-4, 2.0, "pass", {"resolution": 8}, 3, (2, 1), {"a": 1})
    assert r.to_json() == r.to_json()
    assert json.loads(r.to_json())["value"] == {"re": 2.0, "im": 0.0}
