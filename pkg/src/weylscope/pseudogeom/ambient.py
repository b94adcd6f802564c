"""Pseudo-Euclidean space R^{p,q} and pointwise linear algebra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["AmbientSpace", "signature_at", "q_orthonormal_frame"]


@dataclass(frozen=True)
class AmbientSpace:
    """``R^{p,q}`` with ``Q = diag(+1 x p, -1 x q)`` and Euclidean ``P``.

    The involution ``S`` satisfies ``Q(u, v) = P(S u, v)``; for the diagonal
    form it is ``diag(Q)`` itself.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError(f"invalid signature ({self.p}, {self.q})")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def eps(self) -> np.ndarray:
        return np.concatenate([np.ones(self.p), -np.ones(self.q)])

    @property
    def Q(self) -> np.ndarray:
        return np.diag(self.eps)

    @property
    def P(self) -> np.ndarray:
        return np.eye(self.dim)

    @property
    def S(self) -> np.ndarray:
        return np.diag(self.eps)

    def qform(self, u, v=None):
        """``Q(u, v)`` contracted over the last axis (``Q(u, u)`` if ``v`` is omitted)."""
        u = np.asarray(u)
        v = u if v is None else np.asarray(v)
        return np.sum(u * v * self.eps, axis=-1)

    def __str__(self):
        return f"R^{{{self.p},{self.q}}}"


def signature_at(g, tol: float | None = None):
    """Signature and kernel of a symmetric form.

    Parameters
    ----------
    g : array_like, shape (m, m)
    tol : float, optional
        Eigenvalues with ``|lambda| <= tol`` count as kernel. Defaults to
        ``1e-9`` times the spectral scale (at least 1).

    Returns
    -------
    p, q, kdim : int
    kernel : ndarray, shape (m, kdim)
    """
    g = np.atleast_2d(np.asarray(g, dtype=float))
    g = 0.5 * (g + g.T)
    lam, vec = np.linalg.eigh(g)
    if tol is None:
        tol = 1e-9 * max(1.0, float(np.max(np.abs(lam))))
    pos = int(np.sum(lam > tol))
    neg = int(np.sum(lam < -tol))
    ker = vec[:, np.abs(lam) <= tol]
    return pos, neg, ker.shape[1], ker


def q_orthonormal_frame(vectors, form):
    """Gram-Schmidt with pivoting on ``|form(v, v)|``.

    Parameters
    ----------
    vectors : ndarray, shape (n, k)
        Columns spanning a nondegenerate subspace.
    form : ndarray, shape (n, n)
        Symmetric bilinear form.

    Returns
    -------
    frame : ndarray, shape (n, k)
    eps : ndarray, shape (k,)
        ``form(e_a, e_a)``, each +1 or -1.
    """
    rest = [np.asarray(vectors[:, j], dtype=float) for j in range(vectors.shape[1])]
    frame, eps = [], []
    while rest:
        norms = [abs(v @ form @ v) for v in rest]
        j = int(np.argmax(norms))
        v = rest.pop(j)
        n2 = v @ form @ v
        if abs(n2) < 1e-13 * max(1.0, float(v @ v)):
            # every remaining vector is null: mix in another to leave the cone
            if not rest:
                raise np.linalg.LinAlgError("degenerate subspace")
            w = rest[0]
            v = v + w if abs((v + w) @ form @ (v + w)) > abs((v - w) @ form @ (v - w)) else v - w
            n2 = v @ form @ v
            if abs(n2) < 1e-13 * max(1.0, float(v @ v)):
                raise np.linalg.LinAlgError("degenerate subspace")
        e = v / np.sqrt(abs(n2))
        s = 1.0 if n2 > 0 else -1.0
        frame.append(e)
        eps.append(s)
        rest = [w - s * (e @ form @ w) * e for w in rest]
    return np.stack(frame, axis=1), np.array(eps)
