"""Tube volumes against Monte Carlo, and the R^{1,1} crossing count for planar domains."""

from weylscope.lkmeasures import (
    TubeSpec,
    boundary_curves,
    euler_intersection_m11,
    perturb_curve,
    tube_volume_formula,
    tube_volume_oracle,
)
from weylscope.pseudogeom import AmbientSpace, build

TUBES = [("segment:timelike,2", (2, 1), 0.1), ("segment:spacelike,1", (1, 1), 0.5), ("circle:1", (3, 0), 0.1)]

if __name__ == "__main__":
    for target, amb, r in TUBES:
        spec = TubeSpec(build(target, AmbientSpace(*amb)), r)
        est, se = tube_volume_oracle(spec, samples=10**6, seed=42)
        f = tube_volume_formula(spec)
        print(f"tube {target:20s} r={r}: formula {f:.6f}  MC {est:.6f} +- {se:.1e}  ({abs(f - est) / se:.2f} sigma)")

    for target in ("disc:1", "annulus:1,2"):
        dom = build(target)
        curves = boundary_curves(dom)
        wobbly = [perturb_curve(c, 0.1 * R / 9, mode=3) for c, (R, _) in zip(curves, dom.boundary)]
        chi, crossings = euler_intersection_m11(curves)
        chi_p, _ = euler_intersection_m11(wobbly)
        print(f"m11 {target:12s} chi = {chi} from {len(crossings)} crossings; perturbed chi = {chi_p}")
