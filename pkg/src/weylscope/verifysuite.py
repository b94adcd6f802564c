"""Numerical verification of the distributional identities used by the package.

Four families of checks:

* the product identity for ``J_{m,a}(sigma, rho; chi_i^{-(m+2)/2})``, where
  ``J_{m,a}(sigma, rho; f) = int_0^{pi/2} f(sigma cos^2 t + rho sin^2 t)
  sin^a t cos^{m-a} t dt``;
* Weyl's sphere lemma in indefinite signature;
* the residue, Fourier and point-evaluation tables of :mod:`weylscope.homdist`.

Every check returns an :class:`IdentityCase` carrying both sides and a verdict.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import convolve2d

from . import __version__
from ._parallel import ordered_map
from .homdist import (
    Bump,
    GaussPoly,
    MeromorphicFamily,
    PowerProduct,
    chi,
    chi_eval_pm1,
    fourier,
    fourier_duality_check,
    regularized_pair,
    residue_numeric_check,
)
from .quadrature import gauss_legendre
from .specfun import HalfInteger, gamma, sine_integral_S

__all__ = [
    "IdentityCase", "GaussPoly2D", "PoleOfConstantError", "QuadratureFailure",
    "default_test_functions", "pushforward_line", "j_pointwise", "verify_j_identity",
    "verify_j_frozen", "weyl_constant", "verify_weyl_lemma", "run_table_suite",
    "run_j_suite", "run_weyl_suite", "cases_to_json", "cases_to_csv",
]

J_TOL = 1e-6
TABLE_TOL = 1e-8
ZERO_TOL = 1e-10


class PoleOfConstantError(ValueError):
    """A Gamma factor of the closed form sits at a pole."""


class QuadratureFailure(RuntimeError):
    """The t-integration did not settle within its node budget."""


@dataclass
class IdentityCase:
    """One identity instance with both sides evaluated.

    ``error`` is relative to ``|rhs|`` when ``relative`` is set and ``|rhs|``
    exceeds the tolerance, and absolute otherwise.
    """

    identity: str
    params: dict
    test_function: str
    tol: float
    lhs: complex
    rhs: complex
    relative: bool = True
    details: dict = field(default_factory=dict)

    @property
    def abs_error(self) -> float:
        return float(abs(self.lhs - self.rhs))

    @property
    def rel_error(self) -> float:
        scale = abs(self.rhs)
        return self.abs_error / scale if scale > 0 else self.abs_error

    @property
    def error(self) -> float:
        if self.relative and abs(self.rhs) > self.tol:
            return self.rel_error
        return self.abs_error

    @property
    def passed(self) -> bool:
        return bool(self.error < self.tol)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "test_function": self.test_function,
            "tol": self.tol,
            "lhs": {"re": float(np.real(self.lhs)), "im": float(np.imag(self.lhs))},
            "rhs": {"re": float(np.real(self.rhs)), "im": float(np.imag(self.rhs))},
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "pass": self.passed,
            "details": {k: _plain(v) for k, v in self.details.items()},
        }


def _plain(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(np.real(v)), "im": float(np.imag(v))}
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, HalfInteger):
        return v.value
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def cases_to_json(cases, *, config: dict | None = None) -> str:
    """Deterministic JSON document for a list of cases."""
    doc = {
        "version": __version__,
        "config": config or {},
        "n_cases": len(cases),
        "n_pass": sum(c.passed for c in cases),
        "cases": [c.to_dict() for c in cases],
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def cases_to_csv(cases) -> str:
    """One row per case: identity, parameters, both sides, errors, verdict."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["identity", "params", "test_function", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                "abs_error", "rel_error", "tol", "pass"])
    for c in cases:
        params = ";".join(f"{k}={_plain(v)}" for k, v in c.params.items())
        w.writerow([c.identity, params, c.test_function, repr(float(np.real(c.lhs))),
                    repr(float(np.imag(c.lhs))), repr(float(np.real(c.rhs))), repr(float(np.imag(c.rhs))),
                    repr(c.abs_error), repr(c.rel_error), c.tol, int(c.passed)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# two-variable Gaussian test functions


class GaussPoly2D:
    """``P(sigma, rho) exp(-a sigma^2 - b rho^2)``.

    Parameters
    ----------
    coeffs : array_like (k, l)
        ``coeffs[i, j]`` multiplies ``sigma^i rho^j``.
    a, b : float
        Positive Gaussian rates.
    name : str
    """

    def __init__(self, coeffs, a: float = 0.5, b: float = 0.5, name: str = "gauss2d"):
        if not (a > 0 and b > 0):
            raise ValueError("Gaussian rates must be positive")
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        self.a, self.b = float(a), float(b)
        self.name = name

    def __call__(self, sigma, rho):
        sigma, rho = np.asarray(sigma, dtype=float), np.asarray(rho, dtype=float)
        poly = np.polynomial.polynomial.polyval2d(sigma, rho, self.coeffs)
        return poly * np.exp(-self.a * sigma ** 2 - self.b * rho ** 2)

    def sigma_factors(self):
        """Pairs ``(sigma^i exp(-a sigma^2), GaussPoly in rho)``, one per row."""
        return [(i, GaussPoly(self.coeffs[i], self.b)) for i in range(self.coeffs.shape[0])]

    def rho_factors(self):
        return [(j, GaussPoly(self.coeffs[:, j], self.a)) for j in range(self.coeffs.shape[1])]

    def swapped(self) -> "GaussPoly2D":
        return GaussPoly2D(self.coeffs.T, self.b, self.a, self.name + "^T")


def default_test_functions() -> list[GaussPoly2D]:
    """The product Gaussian and a non-symmetric Gaussian with a polynomial factor."""
    c = np.zeros((3, 3))
    c[0, 0], c[1, 0], c[0, 1], c[1, 1], c[0, 2], c[2, 0] = 1.0, 0.5, -0.3, 0.4, 0.25, 0.2
    return [GaussPoly2D([[1.0]], 0.5, 0.5, "gauss"), GaussPoly2D(c, 0.8, 0.6, "gausspoly")]


def _linear_power(u1: float, u2: float, n: int) -> np.ndarray:
    """Coefficients of ``(u1 x + u2 y)^n`` indexed ``[deg_x, deg_y]``."""
    out = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        out[k, n - k] = math.comb(n, k) * u1 ** k * u2 ** (n - k)
    return out


def _compose(coeffs: np.ndarray, sig: tuple, rho: tuple) -> np.ndarray:
    """``P(sig1 x + sig2 y, rho1 x + rho2 y)`` as a coefficient array in ``(x, y)``."""
    k, l = coeffs.shape
    deg = k + l - 2
    out = np.zeros((deg + 1, deg + 1), dtype=complex)
    for i in range(k):
        si = _linear_power(*sig, i)
        for j in range(l):
            if coeffs[i, j] == 0:
                continue
            term = convolve2d(si, _linear_power(*rho, j))
            out[:term.shape[0], :term.shape[1]] += coeffs[i, j] * term
    return out


def pushforward_line(phi: GaussPoly2D, t: float) -> GaussPoly:
    """Push ``phi`` forward under ``(sigma, rho) -> sigma cos^2 t + rho sin^2 t``.

    The result is the exact line integral of ``phi`` over each level set
    against the coarea density, again a polynomial times a Gaussian.
    """
    c, s = math.cos(t) ** 2, math.sin(t) ** 2
    coeffs, a, b = phi.coeffs, phi.a, phi.b
    if c < s:
        coeffs, a, b, c, s = coeffs.T, b, a, s, c
    # first variable = (x - s * second) / c; second = mu x + y
    den = a * s * s + b * c * c
    mu = a * s / den
    alpha = den / (c * c)
    poly = _compose(coeffs, ((1.0 - s * mu) / c, -s / c), (mu, 1.0))
    l = np.arange(poly.shape[1])
    moments = np.where(l % 2 == 0, np.array([gamma((j + 1) / 2) for j in l]) * alpha ** (-(l + 1) / 2), 0.0)
    return GaussPoly(poly @ moments / c, a * b / den)


# ---------------------------------------------------------------------------
# J identity


def _j_rhs_distributions(m: int, a: int, i: int):
    """Signed tensor factors ``(coef, D_sigma, D_rho)`` of the right-hand side."""
    out = []
    for j in (0, 1):
        out.append(((-1) ** ((i + 1) * j), chi(i + j, HalfInteger(-(m - a + 1))),
                    chi(j, HalfInteger(-(a + 1)))))
    return out


def _iterated_pair(d_sigma, d_rho, phi: GaussPoly2D, rho_first: bool = True) -> complex:
    if rho_first:
        inner = [regularized_pair(d_rho, g) for _, g in phi.sigma_factors()]
        return regularized_pair(d_sigma, GaussPoly(inner, phi.a))
    inner = [regularized_pair(d_sigma, g) for _, g in phi.rho_factors()]
    return regularized_pair(d_rho, GaussPoly(inner, phi.b))


def _j_lhs(m: int, a: int, d, phi: GaussPoly2D, nodes: int) -> complex:
    t, w = gauss_legendre(nodes, 0.0, math.pi / 2)
    vals = np.array([regularized_pair(d, pushforward_line(phi, tk)) for tk in t])
    weight = np.sin(t) ** a * np.cos(t) ** (m - a)
    return complex(np.sum(w * weight * vals))


def verify_j_identity(m: int, a: int, i: int, phi: GaussPoly2D | None = None, grid: int = 48,
                      tol: float = J_TOL, check_swap: bool = True) -> IdentityCase:
    """Both sides of the ``J_{m,a}`` product identity paired against ``phi``.

    Parameters
    ----------
    m, a, i : int
        ``0 <= a <= m``; ``i`` is taken mod 2.
    phi : GaussPoly2D, optional
        Defaults to ``exp(-(sigma^2 + rho^2)/2)``.
    grid : int
        Gauss-Legendre nodes in ``t``; the estimate at ``grid // 2`` nodes
        gives ``details['t_error']``.

    Raises
    ------
    QuadratureFailure
        The t-integration differs between ``grid`` and ``grid // 2`` nodes by
        more than the tolerance.
    """
    if not 0 <= a <= m:
        raise ValueError("need 0 <= a <= m")
    phi = phi or default_test_functions()[0]
    d = chi(i, HalfInteger(-(m + 2)))
    lhs = _j_lhs(m, a, d, phi, grid)
    lhs_half = _j_lhs(m, a, d, phi, max(2, grid // 2))
    S = sine_integral_S(a, m - a)
    rhs = S * sum(coef * _iterated_pair(ds, dr, phi) for coef, ds, dr in _j_rhs_distributions(m, a, i))
    details = {"t_nodes": grid, "t_error": abs(lhs - lhs_half)}
    if check_swap:
        swapped = S * sum(coef * _iterated_pair(ds, dr, phi, rho_first=False)
                          for coef, ds, dr in _j_rhs_distributions(m, a, i))
        details["fubini_gap"] = abs(swapped - rhs)
    if details["t_error"] > tol * max(1.0, abs(rhs)):
        raise QuadratureFailure(f"t-integration unsettled for (m,a,i)=({m},{a},{i}): {details['t_error']:.3g}")
    return IdentityCase("J", {"m": m, "a": a, "i": i % 2}, phi.name, tol, lhs, complex(rhs), True, details)


def j_pointwise(m: int, a: int, d, sigma: float, rho: float) -> complex:
    """``J_{m,a}(sigma, rho; d)`` at a point by a one-dimensional pairing.

    With ``v = sin^2 t`` the integral becomes ``<d, g>`` for a weight ``g``
    of power-product type on the segment between ``sigma`` and ``rho``.
    """
    if sigma == rho:
        return complex(d(np.array([sigma]))[0]) * sine_integral_S(a, m - a)
    al, be = (a - 1) / 2, (m - a - 1) / 2
    c = 0.5 / abs(rho - sigma) ** (m / 2)
    g = PowerProduct(c, sigma, al, rho, be) if rho > sigma else PowerProduct(c, rho, be, sigma, al)
    return regularized_pair(d, g)


def verify_j_frozen(m: int, a: int, i: int, sigma: float, tol: float = J_TOL) -> IdentityCase:
    """``J_{m,a}(sigma, 1; chi_i^{-(m+2)/2}) = S(a, m-a) chi_i^{-(m+1-a)/2}(sigma)``."""
    lhs = j_pointwise(m, a, chi(i, HalfInteger(-(m + 2))), sigma, 1.0)
    rdist = chi(i, HalfInteger(-(m + 1 - a)))
    if abs(sigma) == 1.0:
        val = chi_eval_pm1(i, HalfInteger(-(m + 1 - a)), int(sigma))
    else:
        val = complex(rdist(np.array([sigma]))[0])
    rhs = sine_integral_S(a, m - a) * val
    return IdentityCase("J_frozen", {"m": m, "a": a, "i": i % 2, "sigma": sigma}, "point", tol,
                        lhs, complex(rhs), False)


def run_j_suite(m_max: int = 4, grid: int = 48, sigmas=(-1.0, -0.5, 0.5, 1.0),
                test_functions=None) -> list[IdentityCase]:
    """Default lattice: all ``(m, a, i)`` with ``m <= m_max`` against each test
    function, the frozen ``rho = 1`` profile and ``J_{1,0}(1, -1; chi_1^{-3/2})``."""
    phis = test_functions or default_test_functions()
    lattice = [(m, a, i, phi) for m in range(m_max + 1) for a in range(m + 1) for i in (0, 1) for phi in phis]
    cases = ordered_map(lambda c: verify_j_identity(c[0], c[1], c[2], c[3], grid), lattice)
    frozen = [(m, a, i, s) for m in range(m_max + 1) for a in range(m + 1) for i in (0, 1) for s in sigmas]
    cases += ordered_map(lambda c: verify_j_frozen(*c), frozen)
    val = j_pointwise(1, 0, chi(1, HalfInteger(-3)), 1.0, -1.0)
    cases.append(IdentityCase("J_point", {"m": 1, "a": 0, "i": 1, "sigma": 1.0, "rho": -1.0}, "point",
                              TABLE_TOL, val, 1.0 + 0j, False))
    return cases


# ---------------------------------------------------------------------------
# Weyl lemma


def _sphere_moment(n: int, h: int) -> float:
    """``int_{S^{n-1}} y_1^h`` for ``n >= 1``."""
    if h % 2:
        return 0.0
    return 2.0 * gamma((h + 1) / 2) * math.pi ** ((n - 1) / 2) / gamma((n + h) / 2)


def weyl_constant(n: int, h: int) -> float:
    """``c(n, h)``: zero for odd ``h``, else ``2 Gamma((h+1)/2) pi^{(n-1)/2} / Gamma((n+h)/2)``."""
    if n < 1:
        raise PoleOfConstantError(f"c({n},{h}) needs n >= 1")
    return _sphere_moment(n, h)


def _chi_at(i: int, s: HalfInteger, sign: int) -> float:
    if s.twice == 0:
        return 1.0 if i % 2 == 0 else 0.0
    return float(chi_eval_pm1(i, s, sign))


def verify_weyl_lemma(p: int, q: int, h: int, i: int, tol: float = J_TOL) -> IdentityCase:
    """Sphere integral ``int chi_i^{-(p+q+h)/2}(Q(y,y)) Q(y,e_1)^h dS`` against its closed form.

    ``e_1`` is the first basis vector, so ``Q(e_1, e_1) = -1`` when ``p = 0``;
    the closed form then carries ``Q(e_1, e_1)^{h/2}``. For ``p, q >= 1`` the
    left side is the pairing of ``chi`` with the level-set profile of
    ``Q(y, y)`` on the sphere.
    """
    if p < 0 or q < 0 or p + q < 2 or h < 0:
        raise PoleOfConstantError(f"need p + q >= 2 and h >= 0, got p={p}, q={q}, h={h}")
    n = p + q
    s = HalfInteger(-(n + h))
    rhs = 0.0
    if h % 2 == 0:
        rhs = weyl_constant(n, h) * _chi_at(i, HalfInteger(-q), -1) * (1.0 if p else (-1.0) ** (h // 2))
    if h % 2:
        lhs = 0.0
    elif q == 0:
        lhs = _chi_at(i, s, 1) * _sphere_moment(p, h)
    elif p == 0:
        lhs = _chi_at(i, s, -1) * _sphere_moment(q, h)
    else:
        ap, aq = (p + h - 2) / 2, (q - 2) / 2
        c = _sphere_moment(p, h) * _sphere_moment(q, 0) / 4 / 2 ** ap / 2 ** aq
        lhs = regularized_pair(chi(i, s), PowerProduct(c, -1.0, ap, 1.0, aq))
    zero = h % 2 == 1 or rhs == 0.0
    tol_eff = ZERO_TOL if zero else tol
    case = IdentityCase("weyl", {"p": p, "q": q, "h": h, "i": i % 2}, "sphere", tol_eff,
                        complex(lhs), complex(rhs), False)
    if not zero:
        case.tol = tol * (1.0 + abs(rhs))
    case.details["structural_zero"] = zero
    return case


def run_weyl_suite(n_max: int = 6, h_max: int = 4) -> list[IdentityCase]:
    """All ``(p, q, h, i)`` with ``2 <= p + q <= n_max`` and ``h <= h_max``."""
    lattice = [(p, n - p, h, i) for n in range(2, n_max + 1) for p in range(n + 1)
               for h in range(h_max + 1) for i in (0, 1)]
    return ordered_map(lambda c: verify_weyl_lemma(*c), lattice)


# ---------------------------------------------------------------------------
# distribution tables

_RESIDUE_CASES = (("x_plus", -1), ("x_plus", -2), ("x_minus", -1), ("x_minus", -3), ("abs", -1), ("sign", -2))
_FOURIER_EXPONENTS = (-0.5, -1.5, -1.0, -2.0)
_DOUBLE_FOURIER_EXPONENTS = (-0.5, -1.5, -2.5, -3.5, -1.0, -2.0, -3.0)


def _table_test_function() -> GaussPoly:
    return GaussPoly([1.0, 0.5, -0.25, 0.125], 0.5)


def _bump_limit(d, x0: float, radius: float = 0.2, levels: int = 4) -> complex:
    """Point value of ``d`` at ``x0`` from unit-mass bumps, Richardson in ``radius^2``."""
    row = [regularized_pair(d, Bump(x0, radius / 2 ** k), tol=1e-13) for k in range(levels)]
    for j in range(1, levels):
        f = 4.0 ** j
        row = [(f * row[k + 1] - row[k]) / (f - 1) for k in range(len(row) - 1)]
    return row[0]


def run_table_suite() -> list[IdentityCase]:
    """Residue, Fourier-duality, point-evaluation and double-Fourier checks."""
    phi = _table_test_function()
    cases = []
    for name, at in _RESIDUE_CASES:
        err = residue_numeric_check(MeromorphicFamily(name), at, phi)
        cases.append(IdentityCase("residue", {"family": name, "at": at}, "gausspoly", TABLE_TOL,
                                  complex(err), 0j, False))
    for s in _FOURIER_EXPONENTS:
        for i in (0, 1):
            d = chi(i, s)
            lhs = regularized_pair(fourier(d), phi)
            rhs = regularized_pair(d, phi.fourier())
            gap = fourier_duality_check(d, phi)
            cases.append(IdentityCase("fourier_duality", {"s": s, "i": i}, "gausspoly", TABLE_TOL,
                                      lhs, rhs, False, {"gap": gap}))
    for s in (-0.5, -1.0):
        for i in (0, 1):
            for sign in (1, -1):
                num = _bump_limit(chi(i, s), float(sign))
                cases.append(IdentityCase("chi_eval", {"s": s, "i": i, "x": sign}, "bump", TABLE_TOL,
                                          num, complex(chi_eval_pm1(i, s, sign)), False))
    for s in _DOUBLE_FOURIER_EXPONENTS:
        for i in (0, 1):
            d = chi(i, s)
            diff = fourier(fourier(d)) - d.reflect() * (2 * math.pi)
            coef = [abs(t.coeff) for t in diff.power_terms] + [abs(t.coeff) for t in diff.delta_terms]
            cases.append(IdentityCase("double_fourier", {"s": s, "i": i}, "coefficients", 1e-12,
                                      complex(max(coef, default=0.0)), 0j, False))
    return cases
