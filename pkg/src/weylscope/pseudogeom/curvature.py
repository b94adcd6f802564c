"""Levi-Civita curvature of nondegenerate metrics and the Gauss equation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambient import q_orthonormal_frame, signature_at
from .manifold import MetricField, ParametricManifold

__all__ = ["DegenerateMetricError", "CurvatureTensorField", "curvature_tensor", "egregium_check",
           "extrinsic_gauss_curvature", "riemann_batch"]


class DegenerateMetricError(ValueError):
    """The metric has a kernel at the requested point."""


@dataclass
class CurvatureTensorField:
    """Curvature data at one parameter point.

    Attributes
    ----------
    u : tuple of float
    metric : ndarray (m, m)
    christoffel : ndarray (m, m, m)
        ``Gamma^i_{jk}``.
    riemann : ndarray (m, m, m, m)
        ``R^i_{jkl}``.
    riemann_lower : ndarray (m, m, m, m)
        ``R_{ijkl} = g_im R^m_{jkl}``.
    frame, frame_eps : ndarray
        A g-orthonormal frame (columns) and its signs.
    mixed : ndarray (m, m, m, m)
        ``R^{ab}_{cd}`` in that frame.
    """

    u: tuple
    metric: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    riemann_lower: np.ndarray
    frame: np.ndarray
    frame_eps: np.ndarray
    mixed: np.ndarray

    @property
    def gaussian_curvature(self) -> float:
        """``R_{1212} / det g`` for two-dimensional metrics."""
        if self.metric.shape[0] != 2:
            raise ValueError("Gaussian curvature needs a two-dimensional metric")
        return float(self.riemann_lower[0, 1, 0, 1] / np.linalg.det(self.metric))

    @property
    def scalar(self) -> float:
        """Scalar curvature ``sum_{a,b} R^{ab}_{ab}``."""
        return float(np.einsum("abab->", self.mixed))


def riemann_batch(g: MetricField, *u):
    """Vectorized ``(g, Gamma^i_jk, R^i_jkl, R_ijkl)`` over parameter arrays."""
    G = np.asarray(g.value(*u), dtype=float)
    dG = np.asarray(g.d1(*u), dtype=float)
    d2G = np.asarray(g.d2(*u), dtype=float)
    Gi = np.linalg.inv(G)
    dGi = -np.einsum("...ia,...kab,...bj->...kij", Gi, dG, Gi)
    # lowered symbols Gamma_{l,jk} and their derivatives
    low = 0.5 * (np.einsum("...jlk->...ljk", dG) + np.einsum("...klj->...ljk", dG) - dG)
    dlow = 0.5 * (np.einsum("...mjlk->...mljk", d2G) + np.einsum("...mklj->...mljk", d2G) - d2G)
    gamma = np.einsum("...il,...ljk->...ijk", Gi, low)
    dgamma = np.einsum("...mil,...ljk->...mijk", dGi, low) + np.einsum("...il,...mljk->...mijk", Gi, dlow)
    R = (np.einsum("...kilj->...ijkl", dgamma) - np.einsum("...likj->...ijkl", dgamma)
         + np.einsum("...ikm,...mlj->...ijkl", gamma, gamma) - np.einsum("...ilm,...mkj->...ijkl", gamma, gamma))
    Rl = np.einsum("...im,...mjkl->...ijkl", G, R)
    return G, gamma, R, Rl


def curvature_tensor(g, *u) -> CurvatureTensorField:
    """Christoffel symbols and Riemann tensor of ``g`` at the point ``u``.

    Parameters
    ----------
    g : MetricField or ParametricManifold
    *u : float

    Raises
    ------
    DegenerateMetricError
        If ``g(u)`` has a kernel.
    """
    if isinstance(g, ParametricManifold):
        g = g.metric_field()
    if not isinstance(g, MetricField) or g.d2 is None:
        raise TypeError("curvature needs a metric field with second derivatives")
    pt = tuple(np.float64(x) for x in u)
    G = np.asarray(g.value(*pt), dtype=float)
    _, _, kdim, _ = signature_at(G)
    if kdim:
        raise DegenerateMetricError(f"metric is degenerate at u={tuple(float(x) for x in u)}")
    G, gamma, R, Rl = riemann_batch(g, *pt)
    E, eps = q_orthonormal_frame(np.eye(G.shape[0]), G)
    Rf = np.einsum("ijkl,ia,jb,kc,ld->abcd", Rl, E, E, E, E)
    mixed = eps[:, None, None, None] * eps[None, :, None, None] * Rf
    return CurvatureTensorField(tuple(float(x) for x in u), G, gamma, R, Rl, E, eps, mixed)


def extrinsic_gauss_curvature(M: ParametricManifold, *u) -> float:
    """Gauss-equation curvature of a surface from its second fundamental form."""
    if M.dim != 2:
        raise ValueError("surfaces only")
    pt = tuple(np.float64(x) for x in u)
    J = M.jac(*pt)
    H = M.hess(*pt)
    Qm = M.ambient.Q
    G = J.T @ Qm @ J
    # normal space = kernel of J^T Q
    _, s, vt = np.linalg.svd(J.T @ Qm)
    normals = vt[len(s[s > 1e-12 * s[0]]):].T
    N, neps = q_orthonormal_frame(normals, Qm)
    K = 0.0
    for r in range(N.shape[1]):
        h = np.einsum("aij,ab,b->ij", H, Qm, N[:, r])
        K += neps[r] * (h[0, 0] * h[1, 1] - h[0, 1] ** 2)
    return float(K / np.linalg.det(G))


def egregium_check(M: ParametricManifold, *u) -> tuple[float, float]:
    """Intrinsic and extrinsic Gaussian curvature of a surface at ``u``.

    Returns
    -------
    (K_int, K_ext) : tuple of float
    """
    K_int = curvature_tensor(M, *u).gaussian_curvature
    return K_int, extrinsic_gauss_curvature(M, *u)
