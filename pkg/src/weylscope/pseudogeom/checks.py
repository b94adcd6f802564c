"""Hypersurface data, LC-regularity of metrics and LC-transversality of hypersurfaces.

Both checks scan a parameter grid for degenerate points:

* sign changes of a signed indicator (``det g`` or ``sigma``) along grid
  edges, refined by bisection;
* local minima of ``rho = sqrt(lambda^2 + M^2)`` refined by Nelder-Mead, which
  catches degenerate points where the indicator touches zero without
  changing sign.

At each degenerate point the margin ``M`` is the length of the differential
that must not vanish (``d(g(v, v))`` on the kernel vector, or ``d sigma``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..pushforward import Domain1D
from .manifold import MetricField, ParametricManifold

__all__ = [
    "HypersurfaceSample",
    "LCVerdict",
    "hypersurface_data",
    "lc_regular_check",
    "lc_transversal_hypersurface_check",
]


@dataclass
class HypersurfaceSample:
    """Euclidean normal data of a hypersurface at one or many parameters.

    Arrays carry the parameter shape in front.
    """

    nu: np.ndarray
    sigma: np.ndarray
    K_E: np.ndarray
    dA_E: np.ndarray
    grad_sigma: np.ndarray
    shape_operator: np.ndarray


def _generalized_cross(J):
    # nu_k = det[J | e_k], orthogonal to the columns with det[J | nu] > 0
    n = J.shape[-2]
    out = np.empty(J.shape[:-2] + (n,))
    for k in range(n):
        e = np.zeros(J.shape[:-2] + (n, 1))
        e[..., k, 0] = 1.0
        out[..., k] = np.linalg.det(np.concatenate([J, e], axis=-1))
    return out


def _surface_data(M):
    # explicit algebra on component arrays for surfaces in 3-space
    def run(*u):
        J, H = M.jet_components(*u)
        a, b = [J[k][0] for k in range(3)], [J[k][1] for k in range(3)]
        n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        norm = np.sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2])
        if np.any(norm < 1e-12):
            raise ValueError("rank deficiency in the chart differential")
        inv = M.orientation / norm
        n = [c * inv for c in n]
        E = a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
        F = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        G = b[0] * b[0] + b[1] * b[1] + b[2] * b[2]
        L = H[0][0][0] * n[0] + H[1][0][0] * n[1] + H[2][0][0] * n[2]
        Mm = H[0][0][1] * n[0] + H[1][0][1] * n[1] + H[2][0][1] * n[2]
        N = H[0][1][1] * n[0] + H[1][1][1] * n[1] + H[2][1][1] * n[2]
        det1 = E * G - F * F
        s00 = (G * L - F * Mm) / det1
        s01 = (G * Mm - F * N) / det1
        s10 = (E * Mm - F * L) / det1
        s11 = (E * N - F * Mm) / det1
        e = M.ambient.eps
        sigma = e[0] * n[0] * n[0] + e[1] * n[1] * n[1] + e[2] * n[2] * n[2]
        q0 = e[0] * n[0] * a[0] + e[1] * n[1] * a[1] + e[2] * n[2] * a[2]
        q1 = e[0] * n[0] * b[0] + e[1] * n[1] * b[1] + e[2] * n[2] * b[2]
        grad = np.stack([-2.0 * (s00 * q0 + s10 * q1), -2.0 * (s01 * q0 + s11 * q1)], axis=-1)
        S = np.stack([np.stack([s00, s01], axis=-1), np.stack([s10, s11], axis=-1)], axis=-2)
        return HypersurfaceSample(np.stack(n, axis=-1), sigma, (L * N - Mm * Mm) / det1, np.sqrt(det1), grad, S)

    return run


def hypersurface_data(M: ParametricManifold, *u) -> HypersurfaceSample:
    """Euclidean normal, ``sigma = Q(nu_E)``, ``K_E``, ``dA_E`` and ``grad sigma``.

    Raises
    ------
    ValueError
        ``M`` is not of codimension one, or the differential is rank-deficient.
    """
    if M.ambient.dim != M.dim + 1:
        raise ValueError("hypersurface data needs codimension one")
    if M.dim == 2:
        return _surface_data(M)(*u)
    J, H = M.jac(*u), M.hess(*u)
    nu = _generalized_cross(J) * M.orientation
    norm = np.linalg.norm(nu, axis=-1)
    if np.any(norm < 1e-12):
        raise ValueError("rank deficiency in the chart differential")
    nu = nu / norm[..., None]
    first = np.einsum("...ai,...aj->...ij", J, J)
    second = np.einsum("...aij,...a->...ij", H, nu)
    S = np.linalg.solve(first, second)
    K = np.linalg.det(S)
    dA = np.sqrt(np.linalg.det(first))
    eps = M.ambient.eps
    sigma = np.sum(eps * nu * nu, axis=-1)
    # d_i nu = -sum_j S_ji d_j f
    qnf = np.einsum("...a,a,...aj->...j", nu, eps, J)
    grad = -2.0 * np.einsum("...ji,...j->...i", S, qnf)
    return HypersurfaceSample(nu, sigma, K, dA, grad, S)


@dataclass
class LCVerdict:
    """Outcome of a degenerate-point scan.

    Attributes
    ----------
    regular : bool
    min_margin : float
        Smallest margin over the degenerate points (``inf`` if none).
    violations : list of dict
        ``{"chart", "u", "margin"}`` for points with margin below ``tol``,
        worst first and capped at ``MAX_REPORTED``.
    n_violations : int
    degenerate_points : int
        Number of degenerate points inspected.
    tol : float
    """

    regular: bool
    min_margin: float
    violations: list = field(default_factory=list)
    degenerate_points: int = 0
    tol: float = 0.0
    n_violations: int = 0

    def to_dict(self):
        return {"regular": self.regular, "min_margin": self.min_margin, "tol": self.tol,
                "n_violations": self.n_violations,
                "degenerate_points": self.degenerate_points,
                "violations": [{"chart": v["chart"], "u": [float(x) for x in v["u"]], "margin": v["margin"]}
                               for v in self.violations]}


MAX_REPORTED = 32


def _verdict(margins, violations, tol):
    worst = sorted(violations, key=lambda v: v["margin"])
    min_margin = float(min(margins)) if margins else math.inf
    return LCVerdict(not violations, min_margin, worst[:MAX_REPORTED], len(margins), float(tol), len(violations))


def _grid(domain, n):
    if isinstance(domain, Domain1D):
        if domain.periodic:
            return (domain.a + (domain.b - domain.a) * np.arange(n + 1) / n,)
        return (np.linspace(domain.a, domain.b, n + 1),)
    axes = []
    for a, b, per in ((domain.a1, domain.b1, domain.periodic[0]), (domain.a2, domain.b2, domain.periodic[1])):
        axes.append(a + (b - a) * np.arange(n + 1) / n if per else np.linspace(a, b, n + 1))
    u1, u2 = np.meshgrid(*axes, indexing="ij")
    return u1, u2


def _bounds(domain):
    if isinstance(domain, Domain1D):
        return [(domain.a, domain.b)]
    return [(domain.a1, domain.b1), (domain.a2, domain.b2)]


def _bisect_edges(signed, pa, pb, iters=60):
    fa = signed(*pa)
    for _ in range(iters):
        pm = tuple(0.5 * (x + y) for x, y in zip(pa, pb))
        fm = signed(*pm)
        left = np.sign(fm) == np.sign(fa)
        pa = tuple(np.where(left, m, a) for m, a in zip(pm, pa))
        pb = tuple(np.where(left, b, m) for m, b in zip(pm, pb))
        fa = np.where(left, fm, fa)
    return tuple(0.5 * (x + y) for x, y in zip(pa, pb))


def _sign_change_points(signed, grid):
    S = signed(*grid)
    pts = []
    if len(grid) == 1:
        (u,) = grid
        m = S[:-1] * S[1:] < 0
        if np.any(m):
            pts.append(_bisect_edges(signed, (u[:-1][m],), (u[1:][m],)))
        z = S == 0
        if np.any(z):
            pts.append((u[z],))
    else:
        u1, u2 = grid
        for sl_a, sl_b in (((slice(None, -1), slice(None)), (slice(1, None), slice(None))),
                           ((slice(None), slice(None, -1)), (slice(None), slice(1, None)))):
            m = S[sl_a] * S[sl_b] < 0
            if np.any(m):
                pts.append(_bisect_edges(signed, (u1[sl_a][m], u2[sl_a][m]), (u1[sl_b][m], u2[sl_b][m])))
        z = S == 0
        if np.any(z):
            pts.append((u1[z], u2[z]))
    if not pts:
        return tuple(np.zeros(0) for _ in grid)
    return tuple(np.concatenate([p[i] for p in pts]) for i in range(len(grid)))


def _rho_minima(rho, grid, domain, count):
    R = rho(*grid)
    if len(grid) == 1:
        left = np.concatenate([[np.inf], R[:-1]])
        right = np.concatenate([R[1:], [np.inf]])
        cand = np.nonzero((R <= left) & (R <= right))[0]
        order = cand[np.argsort(R[cand], kind="stable")][:count]
        return [(grid[0][i],) for i in order]
    pad = np.pad(R, 1, constant_values=np.inf)
    c = pad[1:-1, 1:-1]
    is_min = (c <= pad[:-2, 1:-1]) & (c <= pad[2:, 1:-1]) & (c <= pad[1:-1, :-2]) & (c <= pad[1:-1, 2:])
    idx = np.argwhere(is_min)
    vals = R[is_min]
    order = np.argsort(vals, kind="stable")
    # keep distinct candidates: thin out ties along curves
    out, seen = [], set()
    for k in order:
        i, j = idx[k]
        key = (i // 4, j // 4)
        if key in seen:
            continue
        seen.add(key)
        out.append((grid[0][i, j], grid[1][i, j]))
        if len(out) >= count:
            break
    return out


def _refine(rho, start, domain):
    b = _bounds(domain)
    if len(start) == 1:
        a, c = b[0]
        x0 = float(start[0])
        h = 0.02 * (c - a)
        r = minimize_scalar(lambda x: float(rho(np.array([x]))[0]),
                            bounds=(max(a, x0 - h), min(c, x0 + h)), method="bounded",
                            options={"xatol": 1e-12})
        return (float(r.x),)
    r = minimize(lambda x: float(rho(np.array([x[0]]), np.array([x[1]]))[0]), np.array(start, dtype=float),
                 method="Nelder-Mead", bounds=b, options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400})
    return tuple(float(x) for x in r.x)


def _scan(chart_name, domain, signed, margin, rho, zero_value, n, tol, minima=20):
    """Degenerate points of one chart; returns (margins, violations).

    ``zero_value`` decides whether a refined ``rho`` minimum lies on the
    degenerate set.
    """
    grid = _grid(domain, n)
    pts = _sign_change_points(signed, grid)
    margins = list(np.asarray(margin(*pts), dtype=float)) if len(pts[0]) else []
    locs = [tuple(float(p[i]) for p in pts) for i in range(len(pts[0]))]
    for start in _rho_minima(rho, grid, domain, minima):
        arr = tuple(np.array([v]) for v in start)
        x = tuple(float(v) for v in start) if float(rho(*arr)[0]) <= 1e-3 * tol else _refine(rho, start, domain)
        arr = tuple(np.array([v]) for v in x)
        if abs(float(zero_value(*arr)[0])) <= 1e3 * tol:
            margins.append(float(margin(*arr)[0]))
            locs.append(x)
    violations = [{"chart": chart_name, "u": loc, "margin": float(m)} for loc, m in zip(locs, margins) if m < tol]
    return margins, violations


def _metric_funcs(g: MetricField):
    def eig(*u):
        G = np.asarray(g.value(*u), dtype=float)
        lam, vec = np.linalg.eigh(G)
        k = np.argmin(np.abs(lam), axis=-1)
        lmin = np.take_along_axis(lam, k[..., None], axis=-1)[..., 0]
        v = np.take_along_axis(vec, k[..., None, None], axis=-1)[..., 0]
        return G, lmin, v

    def signed(*u):
        return np.linalg.det(np.asarray(g.value(*u), dtype=float))

    def margin(*u):
        _, _, v = eig(*u)
        dG = np.asarray(g.d1(*u), dtype=float)
        dv = np.einsum("...i,...kij,...j->...k", v, dG, v)
        return np.linalg.norm(dv, axis=-1)

    def rho(*u):
        _, lmin, _ = eig(*u)
        return np.hypot(lmin, margin(*u))

    def lam(*u):
        return np.abs(eig(*u)[1])

    return signed, margin, rho, lam


def lc_regular_check(g, grid: int = 128, tol: float | None = None) -> LCVerdict:
    """Scan a metric of changing signature for points where ``d(g(v, v))`` vanishes on the kernel.

    Parameters
    ----------
    g : MetricField or ParametricManifold
        For a manifold, the induced metric on every chart of its atlas.
    grid : int
        Cells per axis.
    tol : float, optional
        Margin threshold; defaults to ``1e-6`` times the largest ``|dg|`` on
        the grid (at least ``1e-6``).
    """
    fields = [(c.name, c.metric_field()) for c in g.atlas()] if isinstance(g, ParametricManifold) else [(g.name, g)]
    all_margins, all_viol = [], []
    used_tol = tol
    for name, mf in fields:
        signed, margin, rho, lam = _metric_funcs(mf)
        if used_tol is None:
            scale = float(np.max(np.abs(mf.d1(*_grid(mf.domain, grid)))))
            used_tol = 1e-6 * max(1.0, scale)
        margins, viol = _scan(name, mf.domain, signed, margin, rho, lam, grid, used_tol)
        all_margins += margins
        all_viol += viol
    return _verdict(all_margins, all_viol, used_tol)


def lc_transversal_hypersurface_check(M: ParametricManifold, grid: int = 128, tol: float | None = None
                                      ) -> LCVerdict:
    """Check that ``0`` is a regular value of ``sigma = Q(nu_E)`` on every chart.

    The reported margin is ``m_0 = min |grad sigma|`` on the zero set.
    """
    all_margins, all_viol = [], []
    used_tol = tol
    for chart in M.atlas():
        def signed(*u, c=chart):
            return hypersurface_data(c, *u).sigma

        def margin(*u, c=chart):
            return np.linalg.norm(hypersurface_data(c, *u).grad_sigma, axis=-1)

        def rho(*u, c=chart):
            hs = hypersurface_data(c, *u)
            return np.hypot(hs.sigma, np.linalg.norm(hs.grad_sigma, axis=-1))

        if used_tol is None:
            gr = _grid(chart.domain, grid)
            scale = float(np.max(margin(*gr)))
            used_tol = 1e-6 * max(1.0, scale)
        margins, viol = _scan(chart.name, chart.domain, signed, margin, rho, signed, grid, used_tol)
        all_margins += margins
        all_viol += viol
    return _verdict(all_margins, all_viol, used_tol)

