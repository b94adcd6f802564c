"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import io
import json
import math
import time

import pytest

from weylscope.cli import parse_config, run
from weylscope.homdist import chi
from weylscope.lkmeasures import (
    TubeSpec,
    boundary_curves,
    euler_intersection_m11,
    gauss_bonnet_hypersurface,
    perturb_curve,
    scaling_check,
    tube_volume_formula,
    tube_volume_oracle,
)
from weylscope.pseudogeom import (
    AmbientSpace,
    build,
    build_metric,
    lc_regular_check,
    lc_transversal_hypersurface_check,
)
from weylscope.verifysuite import (
    j_pointwise,
    run_j_suite,
    run_table_suite,
    run_weyl_suite,
    verify_j_frozen,
)

pytestmark = pytest.mark.acceptance

R11, R21, R30 = AmbientSpace(1, 1), AmbientSpace(2, 1), AmbientSpace(3, 0)


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] {label}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


def _cli(text):
    buf = io.StringIO()
    code = run(parse_config(text), stdout=buf)
    return code, json.loads(buf.getvalue())


def test_01_gauss_bonnet_sphere_r21(report):
    t0 = time.perf_counter()
    code, doc = _cli("command=gb ambient=2,1 target=sphere:1 grid=2048 tsamples=1024")
    elapsed = time.perf_counter() - t0
    chi_re = doc["report"]["chi_re"]
    ok = code == 0 and abs(chi_re - 2.0) < 5e-3 and elapsed < 30.0
    report("1 GB sphere R^{2,1}", ok, f"Re chi = {chi_re:.6f}, {elapsed:.1f} s")


@pytest.mark.parametrize("target, expected", [("ellipsoid:1,1.3,2.1", 2), ("torus:2,1,x", 0)])
def test_02_topological_stability(report, target, expected):
    rep = gauss_bonnet_hypersurface(build(target, R21))
    ok = abs(rep.value.real - expected) < 5e-3
    report(f"2 GB {target} R^{{2,1}}", ok, f"Re chi = {rep.value.real:.6f}, expected {expected}")


def test_03_riemannian_regression(report):
    code, doc = _cli("command=gb ambient=3,0 target=sphere:1")
    chi_re = doc["report"]["chi_re"]
    report("3 GB sphere R^{3,0}", code == 0 and abs(chi_re - 2.0) < 1e-6, f"Re chi = {chi_re:.12f}")


def test_04_m11_intersection(report):
    results = {}
    for target in ("disc:1", "annulus:1,2"):
        dom = build(target)
        curves = boundary_curves(dom)
        chi0, cr = euler_intersection_m11(curves)
        pert = [perturb_curve(c, 0.1 * R / 9.0, mode=3, phase=0.3 * k)
                for k, (c, (R, _)) in enumerate(zip(curves, dom.boundary))]
        chi1, _ = euler_intersection_m11(pert)
        results[target] = (chi0, len(cr), chi1)
    ok = results["disc:1"] == (1, 4, 1) and results["annulus:1,2"][0] == 0 and results["annulus:1,2"][2] == 0
    detail = ", ".join(f"{t}: chi={a} crossings={n} perturbed chi={b}" for t, (a, n, b) in results.items())
    report("4 m11 disc/annulus", ok, detail)


def test_05_j_identity_suite(report):
    cases = run_j_suite()
    ident = [c for c in cases if c.identity == "J"]
    frozen = [c for c in cases if c.identity == "J_frozen"]
    worst_i = max(c.error for c in ident)
    worst_f = max(c.abs_error for c in frozen)
    j10 = j_pointwise(1, 0, chi(1, -1.5), 1.0, -1.0)
    ok = (len(ident) == 60 and worst_i < 1e-6 and len(frozen) == 120 and worst_f < 1e-6
          and abs(j10 - 1.0) < 1e-8 and all(c.passed for c in cases))
    report("5 J-identity suite", ok, f"{len(ident)} identity cases max error {worst_i:.2e}; "
                                     f"{len(frozen)} frozen cases max abs {worst_f:.2e}; J_1,0 = {j10.real:.12f}")


def test_05b_frozen_points(report):
    worst = max(verify_j_frozen(m, a, i, s).abs_error for m in range(5) for a in range(m + 1)
                for i in (0, 1) for s in (-1.0, -0.5, 0.5, 1.0))
    report("5 frozen-rho pointwise", worst < 1e-6, f"max abs error {worst:.2e}")


def test_06_weyl_lemma_suite(report):
    cases = run_weyl_suite(n_max=6, h_max=4)
    zero = [c for c in cases if c.details["structural_zero"]]
    other = [c for c in cases if not c.details["structural_zero"]]
    worst_z = max(c.abs_error for c in zero)
    worst_o = max(c.abs_error / (1 + abs(c.rhs)) for c in other)
    ok = worst_z < 1e-10 and worst_o < 1e-6
    report("6 Weyl lemma suite", ok, f"{len(cases)} cases; structural zeros max {worst_z:.2e}; "
                                     f"others max {worst_o:.2e} relative to 1+|rhs|")


def test_07_distribution_tables(report):
    cases = run_table_suite()
    counts = {k: sum(c.identity == k for c in cases) for k in ("residue", "fourier_duality", "chi_eval")}
    dbl = [c for c in cases if c.identity == "double_fourier"]
    worst = max(c.error for c in cases if c.identity != "double_fourier")
    ok = (counts == {"residue": 6, "fourier_duality": 8, "chi_eval": 8} and worst < 1e-8
          and max(c.abs_error for c in dbl) < 1e-14 and all(c.passed for c in cases))
    report("7 distribution tables", ok, f"{counts}, max error {worst:.2e}, double Fourier {len(dbl)} cases to rounding")


@pytest.mark.parametrize("target, ambient", [("sphere:1", "2,1"), ("pseudosphere", "2,1"),
                                             ("graph:saddle", "2,1"), ("graph:saddle22", "2,2")])
def test_08_egregium(report, target, ambient):
    code, doc = _cli(f"command=egregium target={target} ambient={ambient} points=200 seed=8")
    gap = doc["report"]["max_discrepancy"]
    report(f"8 egregium {target} R^{{{ambient}}}", code == 0 and gap < 1e-6, f"max discrepancy {gap:.2e}")


@pytest.mark.parametrize("target, amb, r, closed", [
    ("segment:timelike,2", R21, 0.1, math.pi * 2 * 0.1 ** 2),
    ("segment:spacelike,1", R11, 0.5, 2 * 1 * 0.5),
    ("circle:1", R30, 0.1, 2 * math.pi ** 2 * 1 * 0.1 ** 2),
])
def test_09_tube_formula(report, target, amb, r, closed):
    spec = TubeSpec(build(target, amb), r)
    formula = tube_volume_formula(spec)
    est, se = tube_volume_oracle(spec, samples=10**7, seed=42)
    ok = abs(formula - est) < 3 * se and abs(formula - closed) < 1e-12 * closed
    report(f"9 tube {target}", ok, f"formula {formula:.12f}, MC {est:.6f} +- {se:.1e}")


def test_10_scaling(report):
    patches = [("sphere:1", R21, 0), ("sphere:1", R21, 2), ("graph:saddle", R21, 0),
               ("pseudosphere", R21, 0), ("segment:timelike,1", R21, 1), ("sphere:1", R30, 0)]
    worst = max(scaling_check(build(t, a), lam, k) for t, a, k in patches for lam in (4.0, 9.0, -1.0))
    report("10 scaling law", worst < 1e-8, f"max discrepancy {worst:.2e}")


CATALOG = ["sphere:1", "ellipsoid:1,1.3,2.1", "torus:2,1,x", "pseudosphere", "cylinder:1,1",
           "graph:saddle", "graph:paraboloid", "graph:plane", "graph:lightband"]


def test_11_lc_checks(report):
    good = lc_regular_check(build_metric("metric:lcreg"))
    bad = lc_regular_check(build_metric("metric:lcsing"))
    located = bool(bad.violations) and all(abs(v["u"][1]) < 1e-3 for v in bad.violations)
    verdicts = {}
    for target in CATALOG:
        M = build(target, R21)
        verdicts[target] = (lc_transversal_hypersurface_check(M).regular, lc_regular_check(M).regular)
    agree = all(a == b for a, b in verdicts.values())
    ok = good.regular and not bad.regular and located and agree
    summary = ", ".join(f"{t}={'T' if a else 'F'}" for t, (a, _) in verdicts.items())
    report("11 LC checks", ok, f"lcreg regular={good.regular}, lcsing regular={bad.regular} "
                               f"located={located}; catalog agreement={agree} [{summary}]")


def test_12_restriction_consistency(report):
    chi30 = gauss_bonnet_hypersurface(build("sphere:1", R30)).value.real
    chi21 = gauss_bonnet_hypersurface(build("sphere:1", R21)).value.real
    report("12 restriction consistency", abs(chi30 - chi21) < 5e-3, f"R^{{3,0}} {chi30:.6f}, R^{{2,1}} {chi21:.6f}")
