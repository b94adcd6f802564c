"""Named test manifolds and metrics, addressed as ``name:arg,arg``.

Surfaces
    ``sphere:R``, ``ellipsoid:a,b,c``, ``torus:R,r,axis`` (axis in x, y, z),
    ``pseudosphere[:vmax]``, ``cylinder:R,h``, ``graph:kind`` with kind in
    ``saddle``, ``saddle22``, ``lightband``, ``paraboloid``, ``plane``.
Curves
    ``circle:R``, ``segment:timelike,L`` or ``segment:spacelike,L``.
Planar domains (for the Euler characteristic of curve intersections)
    ``disc:R``, ``annulus:R1,R2``.
Abstract metrics
    ``metric:lcreg`` (``dx^2 + y dy^2``), ``metric:lcsing`` (``dx^2 + y^2 dy^2``),
    ``metric:hyperbolic``, ``metric:flattorus``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from ..pushforward import Domain1D, Domain2D
from .ambient import AmbientSpace
from .manifold import MetricField, ParametricManifold

__all__ = ["CatalogError", "PlanarDomain", "parse_target", "build", "build_metric", "default_ambient",
           "SURFACES", "CURVES"]


class CatalogError(ValueError):
    """Unknown catalog entry or malformed arguments."""


SURFACES = ("sphere", "ellipsoid", "torus", "pseudosphere", "cylinder", "graph")
CURVES = ("circle", "segment")
DOMAINS = ("disc", "annulus")

_u, _v = sp.symbols("u v", real=True)


@dataclass(frozen=True)
class PlanarDomain:
    """A compact planar domain bounded by circles centred at the origin.

    ``radii`` lists boundary circles with ``+1`` for outer and ``-1`` for
    inner boundaries.
    """

    name: str
    boundary: tuple

    def contains(self, x, y):
        r = np.hypot(x, y)
        inside = np.ones_like(r, dtype=bool)
        for R, kind in self.boundary:
            inside &= (r <= R) if kind > 0 else (r >= R)
        return inside


def parse_target(target: str):
    """Split ``name:a,b`` into ``("name", ["a", "b"])``."""
    if not isinstance(target, str) or not target.strip():
        raise CatalogError("empty target")
    name, _, rest = target.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    if any(a == "" for a in args):
        raise CatalogError(f"empty argument in {target!r}")
    return name.strip().lower(), args


def _floats(args, n, defaults, target):
    if len(args) > n:
        raise CatalogError(f"{target!r}: expected at most {n} arguments")
    out = list(defaults)
    for i, a in enumerate(args):
        try:
            out[i] = float(a)
        except ValueError:
            raise CatalogError(f"{target!r}: argument {a!r} is not a number") from None
    if any(x is None for x in out):
        raise CatalogError(f"{target!r}: missing arguments")
    if any(not math.isfinite(x) or x <= 0 for x in out):
        raise CatalogError(f"{target!r}: arguments must be positive and finite")
    return out


def default_ambient(target: str) -> AmbientSpace:
    name, args = parse_target(target)
    if name == "graph" and args and args[0] == "saddle22":
        return AmbientSpace(2, 2)
    if name in CURVES or name in DOMAINS:
        return AmbientSpace(1, 1)
    return AmbientSpace(2, 1)


def _orient(M, outward, at):
    """Flip ``M`` so its Euclidean normal agrees with ``outward`` at ``at``."""
    from .checks import hypersurface_data

    nu = hypersurface_data(M, *[np.array([x]) for x in at]).nu[0]
    out = np.asarray([float(sp.sympify(e).subs(dict(zip(M.syms, at)))) for e in outward])
    if float(nu @ out) < 0:
        M.orientation = -M.orientation
    return M


def _need(ambient, n, target):
    if ambient.dim != n:
        raise CatalogError(f"{target!r} lives in dimension {n}, ambient is {ambient}")


def _ellipsoid(ambient, a, b, c, name):
    th, ph = _u, _v
    ex = [a * sp.sin(th) * sp.cos(ph), b * sp.sin(th) * sp.sin(ph), c * sp.cos(th)]
    # full chart for integration: theta on the open interval, phi periodic
    full = ParametricManifold(ambient, (th, ph), ex, Domain2D(0.0, math.pi, 0.0, 2 * math.pi,
                                                              periodic=(False, True), centered=(True, False)),
                              name=name, check=False)
    _orient(full, ex, (1.0, 0.3))
    eps_th = 0.4
    main = ParametricManifold(ambient, (th, ph), ex, Domain2D(eps_th, math.pi - eps_th, 0.0, 2 * math.pi,
                                                              periodic=(False, True)), name=f"{name}/band")
    main.orientation = full.orientation
    caps = []
    x, y = _u, _v
    for sgn, tag in ((1, "north"), (-1, "south")):
        z = sgn * c * sp.sqrt(1 - x ** 2 / a ** 2 - y ** 2 / b ** 2)
        cap = ParametricManifold(ambient, (x, y), [x, y, z], Domain2D(-0.5 * a, 0.5 * a, -0.5 * b, 0.5 * b),
                                 name=f"{name}/{tag}")
        caps.append(_orient(cap, [x / a ** 2, y / b ** 2, z / c ** 2], (0.0, 0.0)))
    full.atlas_charts = [main] + caps
    return full


def _torus(ambient, R, r, axis, name):
    th, ph = _u, _v
    rad = R + r * sp.cos(th)
    core = {"z": [rad * sp.cos(ph), rad * sp.sin(ph), r * sp.sin(th)],
            "x": [r * sp.sin(th), rad * sp.cos(ph), rad * sp.sin(ph)],
            "y": [rad * sp.cos(ph), r * sp.sin(th), rad * sp.sin(ph)]}
    if axis not in core:
        raise CatalogError(f"torus axis must be x, y or z, got {axis!r}")
    ex = core[axis]
    ring = {"z": [R * sp.cos(ph), R * sp.sin(ph), 0], "x": [0, R * sp.cos(ph), R * sp.sin(ph)],
            "y": [R * sp.cos(ph), 0, R * sp.sin(ph)]}[axis]
    M = ParametricManifold(ambient, (th, ph), ex, Domain2D(0.0, 2 * math.pi, 0.0, 2 * math.pi,
                                                           periodic=(True, True)), name=name)
    return _orient(M, [e - c for e, c in zip(ex, ring)], (0.3, 0.7))


def _graph(ambient, kind, name):
    x, y = _u, _v
    box = Domain2D(-0.5, 0.5, -0.5, 0.5)
    if kind == "saddle22":
        _need(ambient, 4, name)
        return ParametricManifold(ambient, (x, y), [x, y, x ** 2 - y ** 2, 2 * x * y], box, name=name)
    _need(ambient, 3, name)
    heights = {"saddle": x ** 2 - y ** 2, "paraboloid": x ** 2 + y ** 2, "plane": sp.Integer(0) * x,
               "lightband": x + sp.Piecewise(((y - sp.Rational(1, 5)) ** 4, y > sp.Rational(1, 5)),
                                             ((y + sp.Rational(1, 5)) ** 4, y < -sp.Rational(1, 5)), (0, True))}
    if kind not in heights:
        raise CatalogError(f"unknown graph {kind!r}")
    M = ParametricManifold(ambient, (x, y), [x, y, heights[kind]], box, name=name)
    return M


def build(target: str, ambient: AmbientSpace | None = None):
    """Manifold (or planar domain) named by ``target`` in ``ambient``.

    Raises
    ------
    CatalogError
    """
    name, args = parse_target(target)
    ambient = ambient or default_ambient(target)
    if name == "sphere":
        _need(ambient, 3, target)
        (R,) = _floats(args, 1, [1.0], target)
        M = _ellipsoid(ambient, R, R, R, target)
        M.catalog_entry = ("sphere", {"R": R})
        return M
    if name == "ellipsoid":
        _need(ambient, 3, target)
        a, b, c = _floats(args, 3, [None, None, None], target)
        return _ellipsoid(ambient, a, b, c, target)
    if name == "torus":
        _need(ambient, 3, target)
        axis = args[2].lower() if len(args) > 2 else "z"
        R, r = _floats(args[:2], 2, [2.0, 1.0], target)
        if r >= R:
            raise CatalogError("torus needs r < R")
        return _torus(ambient, R, r, axis, target)
    if name == "pseudosphere":
        _need(ambient, 3, target)
        (vmax,) = _floats(args, 1, [1.0], target)
        v, ph = _u, _v
        ex = [sp.cosh(v) * sp.cos(ph), sp.cosh(v) * sp.sin(ph), sp.sinh(v)]
        M = ParametricManifold(ambient, (v, ph), ex, Domain2D(-vmax, vmax, 0.0, 2 * math.pi,
                                                              periodic=(False, True)), name=target)
        return _orient(M, [sp.cos(ph), sp.sin(ph), 0], (0.1, 0.2))
    if name == "cylinder":
        _need(ambient, 3, target)
        R, h = _floats(args, 2, [1.0, 1.0], target)
        ph, z = _u, _v
        M = ParametricManifold(ambient, (ph, z), [R * sp.cos(ph), R * sp.sin(ph), z],
                               Domain2D(0.0, 2 * math.pi, -h, h, periodic=(True, False)), name=target)
        return _orient(M, [sp.cos(ph), sp.sin(ph), 0], (0.1, 0.2))
    if name == "graph":
        if len(args) != 1:
            raise CatalogError("graph needs exactly one kind")
        return _graph(ambient, args[0].lower(), target)
    if name == "circle":
        if ambient.dim < 2:
            raise CatalogError("circle needs ambient dimension >= 2")
        (R,) = _floats(args, 1, [1.0], target)
        ex = [R * sp.cos(_u), R * sp.sin(_u)] + [0] * (ambient.dim - 2)
        M = ParametricManifold(ambient, (_u,), ex, Domain1D(0.0, 2 * math.pi, periodic=True), name=target)
        M.catalog_entry = ("circle", {"R": R})
        return M
    if name == "segment":
        if not args or args[0].lower() not in ("timelike", "spacelike"):
            raise CatalogError("segment needs 'timelike' or 'spacelike'")
        (L,) = _floats(args[1:], 1, [1.0], target)
        kind = args[0].lower()
        if kind == "timelike" and ambient.q < 1 or kind == "spacelike" and ambient.p < 1:
            raise CatalogError(f"no {kind} direction in {ambient}")
        k = ambient.dim - 1 if kind == "timelike" else 0
        ex = [_u if i == k else 0 for i in range(ambient.dim)]
        M = ParametricManifold(ambient, (_u,), ex, Domain1D(0.0, L), name=target)
        M.catalog_entry = ("segment", {"axis": k, "L": L})
        return M
    if name == "disc":
        (R,) = _floats(args, 1, [1.0], target)
        return PlanarDomain(target, ((R, 1),))
    if name == "annulus":
        r1, r2 = _floats(args, 2, [None, None], target)
        if r1 >= r2:
            raise CatalogError("annulus needs R1 < R2")
        return PlanarDomain(target, ((r2, 1), (r1, -1)))
    if name == "metric":
        return build_metric(target)
    raise CatalogError(f"unknown target {name!r}")


def build_metric(target: str) -> MetricField:
    """Abstract metric fields on rectangles."""
    name, args = parse_target(target)
    if name != "metric" or len(args) != 1:
        raise CatalogError(f"not a metric target: {target!r}")
    x, y = _u, _v
    kind = args[0].lower()
    if kind == "lcreg":
        return MetricField.from_sympy([[1, 0], [0, y]], (x, y), Domain2D(-1, 1, -1, 1), name=target)
    if kind == "lcsing":
        return MetricField.from_sympy([[1, 0], [0, y ** 2]], (x, y), Domain2D(-1, 1, -1, 1), name=target)
    if kind == "flattorus":
        return MetricField.from_sympy([[1, 0], [0, 1]], (x, y),
                                      Domain2D(0, 2 * math.pi, 0, 2 * math.pi, periodic=(True, True)), name=target)
    if kind == "hyperbolic":
        return MetricField.from_sympy([[1 / y ** 2, 0], [0, 1 / y ** 2]], (x, y), Domain2D(-1, 1, 0.5, 2),
                                      name=target)
    raise CatalogError(f"unknown metric {kind!r}")
