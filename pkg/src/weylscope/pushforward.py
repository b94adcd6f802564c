"""Coarea pushforward of densities under scalar fields, and pairing against it.

The profile ``h(t) = int_{sigma = t} F / |grad sigma|`` is only modelled on a
window ``|t| <= w`` around the singular level. A smooth cutoff ``beta`` that is
1 on ``|t| <= w/2`` and 0 beyond ``w`` splits every pairing into

    <d, h> = <d, beta h> + int d(sigma(u)) (1 - beta(sigma(u))) F(u) du,

the first term by finite-part pairing against the window model, the second by
direct quadrature over the parameter domain (where ``d`` is an ordinary
function).

Window models:

* 1-D fields: exact level sums at Chebyshev nodes, Chebyshev interpolant.
* 2-D fields: marching-squares line integrals on a t-grid, a degree-4 least
  squares fit on ``t_blend <= |t| <= w`` used inside ``|t| < t_blend``, and a
  cubic spline of the samples elsewhere.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from dataclasses import field as dc_field

import numpy as np
from scipy.interpolate import CubicSpline

from ._parallel import ordered_map
from .homdist.distribution import HomDistribution
from .homdist.pairing import regularized_pair
from .homdist.testfunc import TestFunction1D
from .quadrature import gauss_legendre

__all__ = [
    "DegenerateFieldError",
    "SingularityExcludedError",
    "Domain1D",
    "Domain2D",
    "ScalarFieldOnDomain",
    "DensityOnDomain",
    "GridConfig",
    "PushforwardProfile",
    "coarea_profile",
    "pair_profile",
    "smooth_cutoff",
]


class DegenerateFieldError(ValueError):
    """The field is too flat on a level that a singular pairing needs."""


class SingularityExcludedError(ValueError):
    """The pairing needs the level ``t = 0`` but it sits at the edge of the range."""


def _smooth_step(x):
    # 0 for x <= 0, 1 for x >= 1, C-infinity in between
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def smooth_cutoff(t, w: float):
    """1 on ``|t| <= w/2``, 0 on ``|t| >= w``, smooth in between."""
    return _smooth_step((w - np.abs(np.asarray(t, dtype=float))) / (0.5 * w))


# domains -----------------------------------------------------------------------


@dataclass(frozen=True)
class Domain1D:
    """Interval ``[a, b]``; with ``periodic`` the ends are identified."""

    a: float
    b: float
    periodic: bool = False


@dataclass(frozen=True)
class Domain2D:
    """Rectangle ``[a1, b1] x [a2, b2]`` with optional periodic axes.

    ``centered`` marks axes sampled at cell centres, which keeps contour nodes
    off coordinate singularities at the ends (the polar angle of a sphere).
    """

    a1: float
    b1: float
    a2: float
    b2: float
    periodic: tuple = (False, False)
    centered: tuple = (False, False)


@dataclass
class ScalarFieldOnDomain:
    """A field ``sigma`` with vectorized value and gradient oracles.

    For 2-D domains ``value(u1, u2)`` and ``grad(u1, u2) -> (d1, d2)``; for 1-D
    domains ``value(s)`` and ``grad(s)``. The gradient is spot-checked against
    central differences at construction.
    """

    domain: object
    value: object
    grad: object = None
    scale: float = 1.0

    def __post_init__(self):
        if self.grad is None:
            self.grad = self._fd_grad
        else:
            self._spot_check()

    def _fd_grad(self, *u):
        h = np.finfo(float).eps ** (1 / 3) * self.scale
        if len(u) == 1:
            s = np.asarray(u[0], dtype=float)
            return (self.value(s + h) - self.value(s - h)) / (2 * h)
        u1, u2 = (np.asarray(x, dtype=float) for x in u)
        return ((self.value(u1 + h, u2) - self.value(u1 - h, u2)) / (2 * h),
                (self.value(u1, u2 + h) - self.value(u1, u2 - h)) / (2 * h))

    def _spot_check(self):
        rng = np.random.default_rng(12345)
        d = self.domain
        if isinstance(d, Domain1D):
            pts = (d.a + (d.b - d.a) * rng.uniform(0.1, 0.9, 5),)
        else:
            pts = (d.a1 + (d.b1 - d.a1) * rng.uniform(0.1, 0.9, 5),
                   d.a2 + (d.b2 - d.a2) * rng.uniform(0.1, 0.9, 5))
        exact = np.atleast_2d(np.asarray(self.grad(*pts), dtype=float))
        approx = np.atleast_2d(np.asarray(self._fd_grad(*pts), dtype=float))
        scale = max(1.0, float(np.max(np.abs(exact))))
        if np.max(np.abs(exact - approx)) > 1e-4 * scale:
            raise ValueError("gradient oracle disagrees with finite differences")

    def grad_norm(self, *u):
        g = self.grad(*u)
        if isinstance(self.domain, Domain1D):
            return np.abs(np.asarray(g, dtype=float))
        return np.hypot(np.asarray(g[0], dtype=float), np.asarray(g[1], dtype=float))


@dataclass
class DensityOnDomain:
    """Density ``F(u)`` with respect to parameter measure ``du``."""

    value: object
    integrable: bool = True


@dataclass
class GridConfig:
    """Resolution knobs for profiles and pairings.

    Attributes
    ----------
    resolution : int
        Contour grid size per axis (2-D) or sample count (1-D).
    tsamples : int
        Number of levels in the sampled t-grid.
    window_frac : float
        Window half-width as a fraction of the range of ``sigma``.
    blend_frac : float
        ``t_blend`` as a fraction of the window half-width.
    fit_degree : int
        Degree of the least-squares model near 0 (2-D profiles).
    cheb_degree : int
        Degree of the Chebyshev window model (1-D profiles).
    quad_nodes : int
        Nodes per axis for domain quadrature; 0 picks a default.
    tol : float
        Quadrature tolerance for the 1-D finite-part pairing.
    """

    resolution: int = 512
    tsamples: int = 256
    window_frac: float = 0.1
    blend_frac: float = 0.1
    fit_degree: int = 4
    cheb_degree: int = 32
    quad_nodes: int = 0
    tol: float = 1e-11


# sampling helpers ----------------------------------------------------------------


def _axis_nodes(a, b, n, periodic, centered):
    if periodic:
        return a + (b - a) * np.arange(n) / n
    if centered:
        return a + (b - a) * (np.arange(n) + 0.5) / n
    return np.linspace(a, b, n)


def _quad_rule(a, b, n, periodic):
    if periodic:
        x = a + (b - a) * np.arange(n) / n
        return x, np.full(n, (b - a) / n)
    return gauss_legendre(n, a, b)


def _domain_quadrature(domain, n):
    """Tensor rule (nodes, weights) over the parameter domain."""
    if isinstance(domain, Domain1D):
        x, w = _quad_rule(domain.a, domain.b, n, domain.periodic)
        return (x,), w
    x1, w1 = _quad_rule(domain.a1, domain.b1, n, domain.periodic[0])
    x2, w2 = _quad_rule(domain.a2, domain.b2, n, domain.periodic[1])
    u1, u2 = np.meshgrid(x1, x2, indexing="ij")
    return (u1.ravel(), u2.ravel()), np.outer(w1, w2).ravel()


def _t_grid(t_min, t_max, n, w, t_blend):
    n_uni = max(8, (3 * n) // 4)
    uni = np.linspace(t_min, t_max, n_uni + 2)[1:-1]
    if w > 0:
        n_geo = max(2, (n - n_uni) // 2)
        geo = np.geomspace(0.25 * t_blend, w, n_geo)
        uni = np.concatenate([uni, geo, -geo])
    return np.unique(uni)


# 1-D level sums ---------------------------------------------------------------------


def _level_sums_1d(field_, density, levels, n):
    d = field_.domain
    if d.periodic:
        s = d.a + (d.b - d.a) * np.arange(n + 1) / n
    else:
        s = np.linspace(d.a, d.b, n + 1)
    v = np.asarray(field_.value(s), dtype=float)
    lo, hi = v[:-1], v[1:]
    vmin, vmax = np.minimum(lo, hi), np.maximum(lo, hi)
    levels = np.asarray(levels, dtype=float)
    order = np.argsort(levels)
    ts = levels[order]
    start = np.searchsorted(ts, vmin, "left")
    stop = np.searchsorted(ts, vmax, "left")
    counts = stop - start
    cell = np.repeat(np.arange(len(lo)), counts)
    lev = np.concatenate([np.arange(a, b) for a, b in zip(start, stop)]) if counts.sum() else np.zeros(0, int)
    t = ts[lev]
    a, b = s[cell], s[cell + 1]
    fa = lo[cell] - t
    # bisection on each bracket, vectorized
    for _ in range(60):
        m = 0.5 * (a + b)
        fm = np.asarray(field_.value(m), dtype=float) - t
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, m, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, m)
    root = 0.5 * (a + b)
    gn = field_.grad_norm(root)
    contrib = np.asarray(density.value(root), dtype=complex) / gn
    out = np.zeros(len(ts), dtype=complex)
    np.add.at(out, lev, contrib)
    gmin = np.full(len(ts), np.inf)
    np.minimum.at(gmin, lev, gn)
    res = np.empty_like(out)
    res[order] = out
    gm = np.empty_like(gmin)
    gm[order] = gmin
    return res, gm


# 2-D marching squares ---------------------------------------------------------------


def _grid_values(field_, density, domain, n):
    x1 = _axis_nodes(domain.a1, domain.b1, n, domain.periodic[0], domain.centered[0])
    x2 = _axis_nodes(domain.a2, domain.b2, n, domain.periodic[1], domain.centered[1])
    if domain.periodic[0]:
        x1 = np.append(x1, domain.b1)
    if domain.periodic[1]:
        x2 = np.append(x2, domain.b2)
    u1, u2 = np.meshgrid(x1, x2, indexing="ij")
    sig = np.asarray(field_.value(u1, u2), dtype=float)
    gn = np.asarray(field_.grad_norm(u1, u2), dtype=float)
    dens = np.asarray(density.value(u1, u2), dtype=complex)
    return x1, x2, sig, gn, dens


# corner offsets c0..c3 and the edges between consecutive corners
_CORNERS = ((0, 0), (1, 0), (1, 1), (0, 1))
_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def _contour_chunk(args):
    x1, x2, sig, gn, dens, ci, cj, lev, t = args
    corner_v = np.stack([sig[ci + di, cj + dj] for di, dj in _CORNERS], axis=1)
    corner_g = np.stack([gn[ci + di, cj + dj] for di, dj in _CORNERS], axis=1)
    corner_f = np.stack([dens[ci + di, cj + dj] for di, dj in _CORNERS], axis=1)
    cx = np.stack([x1[ci + di] for di, _ in _CORNERS], axis=1)
    cy = np.stack([x2[cj + dj] for _, dj in _CORNERS], axis=1)
    above = corner_v > t[:, None]

    px = np.full((len(t), 4), np.nan)
    py = np.full((len(t), 4), np.nan)
    pg = np.zeros((len(t), 4))
    pf = np.zeros((len(t), 4), dtype=complex)
    cross = np.zeros((len(t), 4), dtype=bool)
    for e, (a, b) in enumerate(_EDGES):
        m = above[:, a] != above[:, b]
        cross[:, e] = m
        va, vb = corner_v[:, a], corner_v[:, b]
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = np.where(m, (t - va) / (vb - va), 0.0)
        px[:, e] = cx[:, a] + lam * (cx[:, b] - cx[:, a])
        py[:, e] = cy[:, a] + lam * (cy[:, b] - cy[:, a])
        pg[:, e] = corner_g[:, a] + lam * (corner_g[:, b] - corner_g[:, a])
        pf[:, e] = corner_f[:, a] + lam * (corner_f[:, b] - corner_f[:, a])

    def seg(e1, e2, mask):
        length = np.hypot(px[mask, e1] - px[mask, e2], py[mask, e1] - py[mask, e2])
        g1 = pf[mask, e1] / pg[mask, e1]
        g2 = pf[mask, e2] / pg[mask, e2]
        return length * 0.5 * (g1 + g2)

    ncross = cross.sum(axis=1)
    contrib = np.zeros(len(t), dtype=complex)
    two = ncross == 2
    if np.any(two):
        first = np.argmax(cross, axis=1)
        last = 3 - np.argmax(cross[:, ::-1], axis=1)
        idx = np.nonzero(two)[0]
        e1, e2 = first[idx], last[idx]
        length = np.hypot(px[idx, e1] - px[idx, e2], py[idx, e1] - py[idx, e2])
        g1 = pf[idx, e1] / pg[idx, e1]
        g2 = pf[idx, e2] / pg[idx, e2]
        contrib[idx] = length * 0.5 * (g1 + g2)
    four = ncross == 4
    if np.any(four):
        center_above = corner_v.mean(axis=1) > t
        same0 = center_above == above[:, 0]
        m1 = four & same0
        m2 = four & ~same0
        # centre joins c0 and c2: cut off c1 and c3
        contrib[m1] = seg(0, 1, m1) + seg(2, 3, m1)
        contrib[m2] = seg(3, 0, m2) + seg(1, 2, m2)
    # gradient norm at crossings for margin bookkeeping
    gmin = np.where(cross, pg, np.inf).min(axis=1)
    return lev, contrib, gmin


def _level_sums_2d(field_, density, levels, n, chunk=400_000, pre=None):
    d = field_.domain
    x1, x2, sig, gn, dens = pre if pre is not None else _grid_values(field_, density, d, n)
    levels = np.asarray(levels, dtype=float)
    order = np.argsort(levels)
    ts = levels[order]
    c = [sig[:-1, :-1], sig[1:, :-1], sig[1:, 1:], sig[:-1, 1:]]
    cmin = np.minimum.reduce(c).ravel()
    cmax = np.maximum.reduce(c).ravel()
    start = np.searchsorted(ts, cmin, "left")
    stop = np.searchsorted(ts, cmax, "left")
    counts = stop - start
    active = np.nonzero(counts)[0]
    ncol = sig.shape[1] - 1

    jobs = []
    total = int(counts[active].sum())
    if total:
        cell = np.repeat(active, counts[active])
        offs = np.arange(total) - np.repeat(np.cumsum(counts[active]) - counts[active], counts[active])
        lev = start[cell] + offs
        for k0 in range(0, total, chunk):
            sl = slice(k0, k0 + chunk)
            ci, cj = np.divmod(cell[sl], ncol)
            jobs.append((x1, x2, sig, gn, dens, ci, cj, lev[sl], ts[lev[sl]]))
    results = ordered_map(_contour_chunk, jobs)
    out = np.zeros(len(ts), dtype=complex)
    gmin = np.full(len(ts), np.inf)
    for lev_c, contrib, gm in results:
        np.add.at(out, lev_c, contrib)
        np.minimum.at(gmin, lev_c, gm)
    res = np.empty_like(out)
    res[order] = out
    gm_out = np.empty_like(gmin)
    gm_out[order] = gmin
    return res, gm_out, (float(sig.min()), float(sig.max()))


# profile ---------------------------------------------------------------------------


class _WindowFunction(TestFunction1D):
    """``beta(t) h(t)`` on the window, as a test function for finite-part pairing."""

    def __init__(self, profile: "PushforwardProfile"):
        self.p = profile
        w, tb = profile.window, profile.t_blend
        bps = [x for x in (-0.5 * w, 0.5 * w, -tb, tb) if tb > 0 or abs(x) > 0]
        super().__init__(self._value, None, order=profile.model_order, support=(-w, w),
                         breakpoints=sorted(set(bps)), scale=w, check=False)

    def _value(self, t):
        return smooth_cutoff(t, self.p.window) * self.p.model_value(t)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        m = np.abs(x) <= self.p.window
        if np.any(m):
            out[m] = self._value(x[m])
        return out

    def taylor(self, n: int, x0: float = 0.0) -> np.ndarray:
        if x0 != 0.0:
            return super().taylor(n, x0)
        c = self.p.model_taylor()
        out = np.zeros(n + 1, dtype=complex)
        m = min(n + 1, len(c))
        out[:m] = c[:m]
        return out


@dataclass
class PushforwardProfile:
    """Sampled coarea pushforward with a smooth model on ``|t| <= window``.

    Attributes
    ----------
    t, h : ndarray
        Sample levels and profile values.
    t_min, t_max : float
        Range of the field.
    window, t_blend : float
        Model window half-width and blend radius (0 when no window is used).
    margin : float
        ``min |grad sigma|`` on the zero level (``inf`` if the level is empty).
    band_margin : float
        ``min |grad sigma|`` over the window levels.
    model_order : int
        Number of trustworthy derivatives of the model at 0.
    """

    t: np.ndarray
    h: np.ndarray
    t_min: float
    t_max: float
    window: float
    t_blend: float
    margin: float
    band_margin: float
    model_order: int
    field: ScalarFieldOnDomain = dc_field(repr=False)
    density: DensityOnDomain = dc_field(repr=False)
    grid: GridConfig = dc_field(repr=False)
    _poly: np.ndarray | None = dc_field(default=None, repr=False)
    _spline: object = dc_field(default=None, repr=False)
    _cheb: object = dc_field(default=None, repr=False)
    fit_residual: float = 0.0
    edge_zero: bool = False

    def model_value(self, t):
        t = np.asarray(t, dtype=float)
        if self._cheb is not None:
            return self._cheb(t).astype(complex)
        inner = np.abs(t) < self.t_blend
        out = np.asarray(self._spline(t), dtype=complex)
        if np.any(inner):
            out[inner] = np.polynomial.polynomial.polyval(t[inner], self._poly)
        return out

    def model_taylor(self) -> np.ndarray:
        if self._cheb is not None:
            c = self._cheb.convert(kind=np.polynomial.Polynomial).coef
            return np.asarray(c, dtype=complex)
        return np.asarray(self._poly, dtype=complex)

    def as_test_function(self) -> TestFunction1D:
        if self.window <= 0:
            raise SingularityExcludedError("profile has no window around t = 0")
        return _WindowFunction(self)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "re_h", "im_h"])
            for t, h in zip(self.t, self.h):
                wr.writerow([repr(float(t)), repr(float(h.real)), repr(float(h.imag))])

    def domain_integral(self, g, n: int | None = None) -> complex:
        """``int g(sigma(u)) F(u) du`` by tensor quadrature over the domain."""
        return _domain_integral(self.field, self.density, g, n or _default_nodes(self))


def _default_nodes(profile) -> int:
    if profile.grid.quad_nodes:
        return profile.grid.quad_nodes
    return 1024 if isinstance(profile.field.domain, Domain2D) else 8192


def _domain_integral(field_, density, g, n):
    nodes, w = _domain_quadrature(field_.domain, n)
    sig = np.asarray(field_.value(*nodes), dtype=float)
    vals = np.asarray(g(sig), dtype=complex) * np.asarray(density.value(*nodes), dtype=complex)
    return complex(math.fsum((vals.real * w).tolist()), math.fsum((vals.imag * w).tolist()))


def _choose_window(t_min, t_max, frac):
    if not (t_min < 0.0 < t_max):
        return 0.0
    w = frac * (t_max - t_min)
    return min(w, 0.5 * min(-t_min, t_max))


def coarea_profile(sigma: ScalarFieldOnDomain, F: DensityOnDomain, grid: GridConfig | None = None
                   ) -> PushforwardProfile:
    """Pushforward ``h(t) = int_{sigma=t} F / |grad sigma|`` with a window model at 0.

    Raises
    ------
    DegenerateFieldError
        ``|grad sigma|`` falls below ``1e-6 * scale`` on a window level, or the
        field is constant.
    """
    grid = grid or GridConfig()
    dom = sigma.domain
    n = grid.resolution
    if isinstance(dom, Domain1D):
        s = np.linspace(dom.a, dom.b, 8 * n + 1)
        vals = np.asarray(sigma.value(s), dtype=float)
        t_min, t_max = float(vals.min()), float(vals.max())
    else:
        gridvals = _grid_values(sigma, F, dom, n)
        vals = gridvals[2]
        t_min, t_max = float(vals.min()), float(vals.max())
    span = t_max - t_min
    scale = max(abs(t_min), abs(t_max), 1e-300)
    if span <= 1e-12 * scale:
        # constant field: no levels to sample, pairings go through the domain
        return PushforwardProfile(np.zeros(0), np.zeros(0, dtype=complex), t_min, t_max, 0.0, 0.0,
                                  math.inf, math.inf, 0, sigma, F, grid)

    w = _choose_window(t_min, t_max, grid.window_frac)
    t_blend = grid.blend_frac * w
    levels = _t_grid(t_min, t_max, grid.tsamples, w, t_blend)
    if w > 0:
        levels = np.unique(np.concatenate([levels, [0.0]]))
    if isinstance(dom, Domain1D):
        h, gmin = _level_sums_1d(sigma, F, levels, 8 * n)
    else:
        h, gmin, _ = _level_sums_2d(sigma, F, levels, n, pre=gridvals)

    margin = math.inf
    band = math.inf
    if w > 0:
        margin = float(gmin[levels == 0.0][0])
        band = float(np.min(gmin[np.abs(levels) <= w]))
        gn_all = sigma.grad_norm(s) if isinstance(dom, Domain1D) else gridvals[3]
        grad_scale = max(float(np.max(gn_all)), 1e-300)
        if band < 1e-6 * grad_scale:
            raise DegenerateFieldError(
                f"|grad sigma| = {band:.3e} on a window level (scale {grad_scale:.3e})")
    prof = PushforwardProfile(levels, h, t_min, t_max, w, t_blend, margin, band, 0, sigma, F, grid)
    if w <= 0:
        # a zero within one cell of the sampled range cannot be excluded
        if isinstance(dom, Domain1D):
            cell, gmax = (dom.b - dom.a) / (8 * n), float(np.max(sigma.grad_norm(s)))
        else:
            cell, gmax = max(dom.b1 - dom.a1, dom.b2 - dom.a2) / n, float(np.max(gridvals[3]))
        prof.edge_zero = bool(np.min(np.abs(vals)) <= cell * gmax)
        return prof

    if isinstance(dom, Domain1D):
        deg = grid.cheb_degree
        cheb_t = w * np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
        hv, _ = _level_sums_1d(sigma, F, cheb_t, 8 * n)
        re = np.polynomial.Chebyshev.fit(cheb_t, hv.real, deg, domain=[-w, w])
        im = np.polynomial.Chebyshev.fit(cheb_t, hv.imag, deg, domain=[-w, w])
        prof._cheb = _ComplexCheb(re, im)
        prof.model_order = 8
    else:
        inwin = np.abs(levels) <= w
        tw, hw = levels[inwin], h[inwin]
        fit = (np.abs(tw) >= t_blend)
        V = np.vander(tw[fit], grid.fit_degree + 1, increasing=True)
        coef, *_ = np.linalg.lstsq(V, hw[fit], rcond=None)
        prof._poly = coef.astype(complex)
        prof._spline = CubicSpline(tw, hw)
        resid = hw[fit] - V @ coef
        prof.fit_residual = float(np.max(np.abs(resid))) if resid.size else 0.0
        prof.model_order = grid.fit_degree
    return prof


class _ComplexCheb:
    def __init__(self, re, im):
        self.re, self.im = re, im

    def __call__(self, t):
        return self.re(t) + 1j * self.im(t)

    def convert(self, kind):
        a = self.re.convert(kind=kind).coef
        b = self.im.convert(kind=kind).coef
        n = max(len(a), len(b))
        out = np.zeros(n, dtype=complex)
        out[: len(a)] += a
        out[: len(b)] += 1j * b
        return _Coef(out)


@dataclass
class _Coef:
    coef: np.ndarray


def pair_profile(d: HomDistribution, h: PushforwardProfile, *, nodes: int | None = None,
                 with_error: bool = False, contour_check: bool = True):
    """``<d, h>`` for a profile; optionally with an error estimate.

    Delta terms read the window model at 0; power terms are paired with the
    windowed model by finite-part integration; the rest of ``d`` is integrated
    over the parameter domain as an ordinary function of ``sigma``.

    The estimate sums the far-field quadrature change under halving ``nodes``,
    the window fit residual and, when ``contour_check`` is set on a 2D domain,
    a Richardson estimate of the contour error from a half-resolution window.

    Raises
    ------
    SmoothnessError
        Delta orders or subtraction depth exceed the model order.
    SingularityExcludedError
        ``0`` is in the closed range of ``sigma`` but no window fits.
    """
    n = nodes or _default_nodes(h)
    w = h.window
    if w <= 0:
        singular = d.max_delta_order >= 0 or any(
            complex(s.value if hasattr(s, "value") else s).real < 0 for s, _ in d.exponent_groups())
        if singular and (h.t_min <= 0.0 <= h.t_max or h.edge_zero):
            raise SingularityExcludedError("the level t = 0 sits at the edge of the field's range")
        def g(t):
            return d(t)

        val = _domain_integral(h.field, h.density, g, n)
        err = abs(val - _domain_integral(h.field, h.density, g, max(8, n // 2)))
        return (val, err) if with_error else val

    near = regularized_pair(d, h.as_test_function(), tol=h.grid.tol)

    def g(t):
        t = np.asarray(t, dtype=float)
        off = np.abs(t) > 0.5 * w
        safe = np.where(off, t, 1.0)
        return np.where(off, d(safe) * (1.0 - smooth_cutoff(safe, w)), 0.0)

    far = _domain_integral(h.field, h.density, g, n)
    val = near + far
    if with_error:
        far2 = _domain_integral(h.field, h.density, g, max(8, n // 2))
        err = abs(far - far2) + _model_error(d, h)
        if contour_check and h._cheb is None:
            err += _contour_error(d, h, near)
        return val, err
    return val


def _contour_error(d, h, near) -> float:
    # marching squares is second order in the cell size
    coarse_grid = replace(h.grid, resolution=max(8, h.grid.resolution // 2))
    try:
        coarse = coarea_profile(h.field, h.density, coarse_grid)
        if coarse.window <= 0:
            return abs(near)
        return abs(near - regularized_pair(d, coarse.as_test_function(), tol=h.grid.tol)) / 3.0
    except DegenerateFieldError:
        return abs(near)


def _model_error(d, h) -> float:
    # spread between the fitted model and the raw samples in the window, as
    # seen by the pairing
    if h._cheb is not None or h.fit_residual == 0.0:
        return 0.0
    mass = sum(abs(c) for _, (cp, cm) in d.exponent_groups() for c in (cp, cm))
    mass += sum(abs(t.coeff) for t in d.delta_terms)
    return float(h.fit_residual * mass * h.window)
