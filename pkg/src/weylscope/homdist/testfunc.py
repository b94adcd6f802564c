"""Test functions on the line with Taylor data at a point.

Every test function exposes the same small surface used by the pairing code:

``f(x)``
    vectorized values (zero outside the support),
``taylor(n, x0=0.0)``
    the coefficients ``f^{(j)}(x0) / j!`` for ``j <= n``,
``support``
    a pair ``(lo, hi)``, possibly infinite when ``schwartz`` is set,
``breakpoints``
    interior points where the quadrature should split,
``singular_points``
    points where ``f`` may have an integrable algebraic singularity.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..quadrature import integrate

__all__ = [
    "SmoothnessError",
    "TestFunction1D",
    "GaussPoly",
    "PowerProduct",
    "Bump",
    "fd_weights",
]


class SmoothnessError(ValueError):
    """The test function does not carry enough derivatives."""


@lru_cache(maxsize=None)
def _fd_stencil(order: int, half_width: int):
    nodes = np.arange(-half_width, half_width + 1, dtype=float)
    return nodes, fd_weights(nodes, order)


def fd_weights(nodes, order: int) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at 0 (unit spacing)."""
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    if order >= n:
        raise ValueError("stencil too small for the requested derivative")
    vander = np.vander(nodes, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(vander, rhs)


class TestFunction1D:
    """A test function given by value and (optional) derivative oracles.

    Parameters
    ----------
    f : callable
        Vectorized value oracle.
    derivative : callable, optional
        ``derivative(j, x0)`` returning ``f^{(j)}(x0)``. Central finite
        differences are used when omitted.
    order : int
        Highest derivative order that may be requested.
    support : tuple of float
        ``(lo, hi)``; infinite ends require ``schwartz=True``.
    schwartz : bool
        Rapid decay flag for unbounded support.
    breakpoints, singular_points : sequence of float
    scale : float
        Length scale for the finite-difference step.
    """

    def __init__(self, f, derivative=None, *, order=4, support=(-math.inf, math.inf),
                 schwartz=False, breakpoints=(), singular_points=(), scale=1.0, check=True):
        self._f = f
        self._derivative = derivative
        self.order = int(order)
        self.support = (float(support[0]), float(support[1]))
        self.schwartz = bool(schwartz)
        self.breakpoints = tuple(sorted(float(b) for b in breakpoints))
        self.singular_points = tuple(sorted(float(b) for b in singular_points))
        self.scale = float(scale)
        if check and derivative is not None and self.order >= 1:
            self._cross_check()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x >= lo) & (x <= hi)
        out = np.zeros(x.shape, dtype=complex)
        if np.any(inside):
            out[inside] = self._f(x[inside])
        return out

    def eval_from(self, anchor: float, sign: float, dist):
        """Values at ``anchor + sign * dist``; overridden where the offset matters."""
        return self(anchor + sign * np.asarray(dist, dtype=float))

    def derivative(self, j: int, x0: float = 0.0) -> complex:
        if j > self.order:
            raise SmoothnessError(f"derivative of order {j} requested, test function has order {self.order}")
        if j == 0:
            return complex(self(np.array([x0]))[0])
        if self._derivative is not None:
            return complex(self._derivative(j, x0))
        return self._fd_derivative(j, x0)

    def _fd_derivative(self, j: int, x0: float) -> complex:
        h = np.finfo(float).eps ** (1.0 / (j + 2)) * self.scale
        nodes, w = _fd_stencil(j, j // 2 + 2)
        vals = self(x0 + h * nodes)
        return complex(np.dot(w, vals) / h**j)

    def taylor(self, n: int, x0: float = 0.0) -> np.ndarray:
        """Coefficients ``f^{(j)}(x0)/j!`` for ``j = 0..n``."""
        return np.array([self.derivative(j, x0) / math.factorial(j) for j in range(n + 1)], dtype=complex)

    def _cross_check(self):
        lo, hi = self.support
        a = max(lo, -self.scale) if math.isfinite(lo) else -self.scale
        b = min(hi, self.scale) if math.isfinite(hi) else self.scale
        for x0 in (a + 0.37 * (b - a), a + 0.61 * (b - a)):
            exact = complex(self._derivative(1, x0))
            approx = self._fd_derivative(1, x0)
            if abs(exact - approx) > 1e-4 * max(1.0, abs(exact)):
                raise ValueError(f"derivative oracle disagrees with finite differences at x={x0:.4g}")


def _poly_derivative(c: np.ndarray) -> np.ndarray:
    if len(c) <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c))


def _poly_mulx(c: np.ndarray) -> np.ndarray:
    return np.concatenate([[0.0], c])


def _poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[: len(a)] += a
    out[: len(b)] += b
    return out


class GaussPoly(TestFunction1D):
    """``P(x) exp(-a x^2)`` with analytic derivatives and Fourier transform.

    Parameters
    ----------
    coeffs : sequence of complex
        Polynomial coefficients in increasing degree.
    a : float
        Positive Gaussian rate.
    """

    def __init__(self, coeffs, a: float = 0.5):
        if not a > 0:
            raise ValueError("GaussPoly needs a > 0")
        self.coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if self.coeffs.size == 0:
            self.coeffs = np.zeros(1, dtype=complex)
        self.a = float(a)
        super().__init__(self._value, self._deriv, order=64, support=(-math.inf, math.inf),
                         schwartz=True, scale=1.0 / math.sqrt(self.a), check=False)
        self._dcache = [self.coeffs]

    def _value(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs) * np.exp(-self.a * x * x)

    def _deriv_poly(self, j: int) -> np.ndarray:
        while len(self._dcache) <= j:
            c = self._dcache[-1]
            self._dcache.append(_poly_add(_poly_derivative(c), -2.0 * self.a * _poly_mulx(c)))
        return self._dcache[j]

    def _deriv(self, j, x0):
        return np.polynomial.polynomial.polyval(x0, self._deriv_poly(j)) * math.exp(-self.a * x0 * x0)

    def __call__(self, x):
        return self._value(np.asarray(x, dtype=float)).astype(complex)

    def fourier(self) -> "GaussPoly":
        """``xi -> int exp(-i xi x) f(x) dx`` in closed form."""
        b = 1.0 / (4.0 * self.a)
        base = np.array([math.sqrt(math.pi / self.a)], dtype=complex)
        # term holds (i d/dxi)^k applied to the Gaussian, as a polynomial factor
        term = base
        out = np.zeros(1, dtype=complex)
        for k, p in enumerate(self.coeffs):
            if k > 0:
                term = 1j * _poly_add(_poly_derivative(term), -2.0 * b * _poly_mulx(term))
            out = _poly_add(out, p * term)
        return GaussPoly(out, b)

    def dilate(self, lam: float) -> "GaussPoly":
        """``x -> f(x / lam) / lam`` for ``lam > 0``."""
        c = self.coeffs / lam ** np.arange(len(self.coeffs)) / lam
        return GaussPoly(c, self.a / lam**2)

    def reflect(self) -> "GaussPoly":
        return GaussPoly(self.coeffs * (-1.0) ** np.arange(len(self.coeffs)), self.a)

    def __add__(self, other):
        if not isinstance(other, GaussPoly) or other.a != self.a:
            return NotImplemented
        return GaussPoly(_poly_add(self.coeffs, other.coeffs), self.a)

    def __mul__(self, c):
        return GaussPoly(self.coeffs * complex(c), self.a)

    __rmul__ = __mul__

    def __repr__(self):
        return f"GaussPoly({self.coeffs.tolist()}, a={self.a})"


def _binom_series(alpha: float, n: int) -> np.ndarray:
    """Coefficients of ``(1 + y)^alpha`` up to ``y^n``."""
    out = np.empty(n + 1)
    out[0] = 1.0
    for i in range(1, n + 1):
        out[i] = out[i - 1] * (alpha - i + 1) / i
    return out


class PowerProduct(TestFunction1D):
    """``c (x - lo)^alpha (hi - x)^beta`` on ``(lo, hi)``, zero outside.

    Smooth in the open interval, with integrable algebraic singularities at
    the ends when ``alpha`` or ``beta`` is in ``(-1, 0)``. Taylor data at
    interior points come from binomial series.
    """

    def __init__(self, c, lo: float, alpha: float, hi: float, beta: float):
        if not lo < hi:
            raise ValueError("need lo < hi")
        if alpha <= -1 or beta <= -1:
            raise ValueError("endpoint exponents must exceed -1")
        self.c = complex(c)
        self.lo, self.hi = float(lo), float(hi)
        self.alpha, self.beta = float(alpha), float(beta)
        sing = [p for p, e in ((self.lo, self.alpha), (self.hi, self.beta)) if e != int(e) or e < 0]
        super().__init__(self._value, None, order=64, support=(self.lo, self.hi),
                         singular_points=sing, scale=self.hi - self.lo, check=False)

    def _value(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.c * np.power(x - self.lo, self.alpha) * np.power(self.hi - x, self.beta)
        return np.where((x > self.lo) & (x < self.hi), v, 0.0)

    def __call__(self, x):
        return np.asarray(self._value(np.asarray(x, dtype=float)), dtype=complex)

    def eval_from(self, anchor: float, sign: float, dist):
        dist = np.asarray(dist, dtype=float)
        x = anchor + sign * dist
        left = dist if anchor == self.lo and sign > 0 else x - self.lo
        right = dist if anchor == self.hi and sign < 0 else self.hi - x
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.c * np.power(left, self.alpha) * np.power(right, self.beta)
        return np.where((left > 0) & (right > 0), v, 0.0).astype(complex)

    def taylor(self, n: int, x0: float = 0.0) -> np.ndarray:
        if not self.lo < x0 < self.hi:
            if x0 < self.lo or x0 > self.hi:
                return np.zeros(n + 1, dtype=complex)
            raise SmoothnessError("Taylor data requested at a singular endpoint")
        dl, dh = x0 - self.lo, self.hi - x0
        # (x-lo)^alpha = dl^alpha (1 + y/dl)^alpha, (hi-x)^beta = dh^beta (1 - y/dh)^beta
        left = _binom_series(self.alpha, n) / dl ** np.arange(n + 1)
        right = _binom_series(self.beta, n) * (-1.0 / dh) ** np.arange(n + 1)
        prod = np.convolve(left, right)[: n + 1]
        return self.c * dl**self.alpha * dh**self.beta * prod.astype(complex)

    def derivative(self, j: int, x0: float = 0.0) -> complex:
        return complex(self.taylor(j, x0)[j] * math.factorial(j))

    def mass(self) -> complex:
        """Closed-form integral over the support."""
        from ..specfun import beta

        width = self.hi - self.lo
        return self.c * width ** (self.alpha + self.beta + 1) * beta(self.alpha + 1, self.beta + 1)


def _bump_profile(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    m = np.abs(y) < 1
    out[m] = np.exp(1.0 - 1.0 / (1.0 - y[m] ** 2))
    return out


_BUMP_MASS = None


def _bump_mass() -> float:
    global _BUMP_MASS
    if _BUMP_MASS is None:
        _BUMP_MASS = float(integrate(_bump_profile, -1.0, 1.0, tol=1e-15, rtol=1e-15)[0])
    return _BUMP_MASS


class Bump(TestFunction1D):
    """Smooth compactly supported unit-mass bump centred at ``center``."""

    def __init__(self, center: float, radius: float):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.center, self.radius = float(center), float(radius)
        norm = 1.0 / (_bump_mass() * self.radius)

        def f(x):
            return norm * _bump_profile((x - self.center) / self.radius)

        super().__init__(f, None, order=6, support=(self.center - self.radius, self.center + self.radius),
                         scale=self.radius, check=False)

    def taylor(self, n: int, x0: float = 0.0) -> np.ndarray:
        if abs(x0 - self.center) >= self.radius:
            return np.zeros(n + 1, dtype=complex)
        return super().taylor(n, x0)
