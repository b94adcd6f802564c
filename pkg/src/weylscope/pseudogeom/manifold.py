"""Parametric immersions into R^{p,q} and metric fields on parameter domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from ..pushforward import Domain1D, Domain2D
from .ambient import AmbientSpace

__all__ = ["OutOfDomainError", "MetricField", "ParametricManifold", "lambdify_array"]


class OutOfDomainError(ValueError):
    """Parameter outside the chart domain."""


def lambdify_array(syms, exprs, shape):
    """Vectorized evaluator for an array of sympy expressions.

    Returns ``fn(*u) -> ndarray`` of shape ``u.shape + shape``; constant
    entries are broadcast.
    """
    flat = [sp.sympify(e) for e in np.asarray(exprs, dtype=object).ravel()]
    fn = sp.lambdify(syms, flat, modules="numpy")

    def call(*u):
        u = [np.asarray(x, dtype=float) for x in u]
        base = np.broadcast(*u).shape if len(u) > 1 else u[0].shape
        vals = fn(*u)
        out = np.empty(base + (len(flat),))
        for k, v in enumerate(vals):
            out[..., k] = np.broadcast_to(np.asarray(v, dtype=float), base)
        return out.reshape(base + tuple(shape))

    return call


def _domain_contains(domain, u, slack=1e-12):
    if isinstance(domain, Domain1D):
        return domain.periodic or (domain.a - slack <= u[0] <= domain.b + slack)
    ok1 = domain.periodic[0] or (domain.a1 - slack <= u[0] <= domain.b1 + slack)
    ok2 = domain.periodic[1] or (domain.a2 - slack <= u[1] <= domain.b2 + slack)
    return ok1 and ok2


@dataclass
class MetricField:
    """A field of symmetric forms ``g(u)`` with first and second derivatives.

    ``value(*u) -> (..., m, m)``, ``d1(*u) -> (..., k, m, m)`` holding
    ``d_k g_ij``, and ``d2(*u) -> (..., k, l, m, m)``.
    """

    dim: int
    domain: object
    value: object
    d1: object
    d2: object = None
    name: str = "metric"

    @classmethod
    def from_sympy(cls, matrix, syms, domain, name="metric"):
        m = len(syms)
        G = sp.Matrix(matrix)
        d1 = [[[sp.diff(G[i, j], syms[k]) for j in range(m)] for i in range(m)] for k in range(m)]
        d2 = [[[[sp.diff(G[i, j], syms[k], syms[l]) for j in range(m)] for i in range(m)]
                for l in range(m)] for k in range(m)]
        return cls(m, domain, lambdify_array(syms, G.tolist(), (m, m)),
                   lambdify_array(syms, d1, (m, m, m)), lambdify_array(syms, d2, (m, m, m, m)), name)

    def at(self, *u) -> np.ndarray:
        return self.value(*[np.float64(x) for x in u])


class ParametricManifold:
    """Immersion ``f: domain -> R^{p,q}`` with derivative jets up to order 3.

    Parameters
    ----------
    ambient : AmbientSpace
    syms : sequence of sympy.Symbol
        Chart parameters (``dim`` of them).
    exprs : sequence of sympy expressions
        Ambient coordinates of ``f``.
    domain : Domain1D or Domain2D
    orientation : int
        +1 or -1; flips the Euclidean normal of hypersurfaces.
    name : str
    """

    def __init__(self, ambient: AmbientSpace, syms, exprs, domain, *, orientation=1, name="manifold",
                 check=True):
        self.ambient = ambient
        self.syms = tuple(syms)
        self.exprs = [sp.sympify(e) for e in exprs]
        self.dim = len(self.syms)
        if len(self.exprs) != ambient.dim:
            raise ValueError(f"chart has {len(self.exprs)} components, ambient dimension is {ambient.dim}")
        self.domain = domain
        self.orientation = 1 if orientation >= 0 else -1
        self.name = name
        self.atlas_charts = None
        self.catalog_entry = None
        n, m = ambient.dim, self.dim
        x = self.syms
        J = [[sp.diff(e, x[i]) for i in range(m)] for e in self.exprs]
        H = [[[sp.diff(e, x[i], x[j]) for j in range(m)] for i in range(m)] for e in self.exprs]
        T = [[[[sp.diff(e, x[i], x[j], x[k]) for k in range(m)] for j in range(m)] for i in range(m)]
             for e in self.exprs]
        self._f = lambdify_array(x, self.exprs, (n,))
        self._J = lambdify_array(x, J, (n, m))
        self._H = lambdify_array(x, H, (n, m, m))
        self._T = lambdify_array(x, T, (n, m, m, m))
        # first and second jets as flat component lists from one CSE'd function
        flat = [sp.sympify(e) for e in np.asarray(J, dtype=object).ravel()]
        flat += [sp.sympify(e) for e in np.asarray(H, dtype=object).ravel()]
        self._jets2 = sp.lambdify(x, flat, modules="numpy", cse=True)
        if check:
            self._setup_checks()

    # jets -----------------------------------------------------------------------

    def point(self, *u):
        return self._f(*u)

    def jac(self, *u):
        return self._J(*u)

    def hess(self, *u):
        return self._H(*u)

    def third(self, *u):
        return self._T(*u)

    def jet_components(self, *u):
        """``(J, H)`` as nested lists of arrays: ``J[a][i]`` and ``H[a][i][j]``."""
        n, m = self.ambient.dim, self.dim
        u = [np.asarray(x, dtype=float) for x in u]
        shape = np.broadcast(*u).shape if len(u) > 1 else u[0].shape
        vals = [np.broadcast_to(np.asarray(v, dtype=float), shape) for v in self._jets2(*u)]
        J = [[vals[a * m + i] for i in range(m)] for a in range(n)]
        off = n * m
        H = [[[vals[off + (a * m + i) * m + j] for j in range(m)] for i in range(m)] for a in range(n)]
        return J, H

    def sample_params(self, n: int = 7):
        """Interior parameter samples as a tuple of flat arrays."""
        d = self.domain
        if isinstance(d, Domain1D):
            return (d.a + (d.b - d.a) * (np.arange(n) + 0.5) / n,)
        a = d.a1 + (d.b1 - d.a1) * (np.arange(n) + 0.5) / n
        b = d.a2 + (d.b2 - d.a2) * (np.arange(n) + 0.5) / n
        u1, u2 = np.meshgrid(a, b, indexing="ij")
        return u1.ravel(), u2.ravel()

    def _setup_checks(self):
        u = self.sample_params()
        J = self.jac(*u)
        s = np.linalg.svd(J, compute_uv=False)
        if np.any(s[..., -1] < 1e-10 * np.maximum(s[..., 0], 1e-300)):
            raise ValueError(f"{self.name}: differential is rank-deficient at a sample point")
        # jets against central differences of the lower jet
        h = np.finfo(float).eps ** (1 / 3)
        k = len(u[0]) // 2
        u0 = [x[k] for x in u]
        for i in range(self.dim):
            up = list(u0)
            dn = list(u0)
            up[i] += h
            dn[i] -= h
            fd1 = (self.point(*up) - self.point(*dn)) / (2 * h)
            fd2 = (self.jac(*up) - self.jac(*dn)) / (2 * h)
            fd3 = (self.hess(*up) - self.hess(*dn)) / (2 * h)
            for exact, approx in ((self.jac(*u0)[:, i], fd1), (self.hess(*u0)[:, :, i], fd2),
                                  (self.third(*u0)[:, :, :, i], fd3)):
                if np.max(np.abs(exact - approx)) > 1e-3 * max(1.0, float(np.max(np.abs(exact)))):
                    raise ValueError(f"{self.name}: jet oracle disagrees with finite differences")

    def check_domain(self, *u):
        if not _domain_contains(self.domain, [float(np.asarray(x).ravel()[0]) for x in u]):
            raise OutOfDomainError(f"{u} is outside the chart domain of {self.name}")

    # induced metric ------------------------------------------------------------

    def induced_metric(self, *u):
        """``g_ij = Q(d_i f, d_j f)``, shape ``(..., m, m)``."""
        J = self.jac(*u)
        eps = self.ambient.eps
        return np.einsum("...ai,a,...aj->...ij", J, eps, J)

    def metric_d1(self, *u):
        J, H = self.jac(*u), self.hess(*u)
        eps = self.ambient.eps
        t = np.einsum("...aki,a,...aj->...kij", H, eps, J)
        return t + np.swapaxes(t, -1, -2)

    def metric_d2(self, *u):
        J, H, T = self.jac(*u), self.hess(*u), self.third(*u)
        eps = self.ambient.eps
        a = np.einsum("...akli,a,...aj->...klij", T, eps, J)
        b = np.einsum("...aki,a,...alj->...klij", H, eps, H)
        return a + np.swapaxes(a, -1, -2) + b + np.swapaxes(b, -1, -2)

    def metric_field(self) -> MetricField:
        return MetricField(self.dim, self.domain, self.induced_metric, self.metric_d1, self.metric_d2,
                           name=f"g[{self.name}]")

    def atlas(self):
        """Charts covering the manifold for pointwise checks (default: this chart)."""
        return self.atlas_charts or [self]

    def with_ambient(self, ambient: AmbientSpace) -> "ParametricManifold":
        """Same chart map, read in another signature of the same dimension."""
        other = ParametricManifold(ambient, self.syms, self.exprs, self.domain,
                                   orientation=self.orientation, name=self.name, check=False)
        if self.atlas_charts:
            other.atlas_charts = [c.with_ambient(ambient) if c is not self else other for c in self.atlas_charts]
        other.catalog_entry = self.catalog_entry
        return other

    def transformed(self, A, name=None) -> "ParametricManifold":
        """Compose the chart with a linear map ``A`` of the ambient space."""
        A = sp.Matrix(np.asarray(A, dtype=float).tolist())
        ex = list(A * sp.Matrix(self.exprs))
        orient = self.orientation * (1 if float(np.linalg.det(np.asarray(A, dtype=float))) > 0 else -1)
        other = ParametricManifold(self.ambient, self.syms, ex, self.domain, orientation=orient,
                                   name=name or self.name, check=False)
        if self.atlas_charts:
            other.atlas_charts = [c.transformed(np.asarray(A, dtype=float)) for c in self.atlas_charts]
        return other

    def __repr__(self):
        return f"ParametricManifold({self.name!r}, dim={self.dim}, ambient={self.ambient})"
