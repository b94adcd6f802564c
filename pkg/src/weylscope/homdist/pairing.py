"""Finite-part pairing of a :class:`HomDistribution` with a test function.

For a power group ``c_+ x_+^s + c_- x_-^s`` put ``G(x) = c_+ f(x) + c_- f(-x)``
on ``x > 0`` with Taylor coefficients ``g_i``. With ``k`` subtracted orders,

    <d, f> = int_0^R x^s (G - T_k) dx + sum_{i<k} g_i R^{s+i+1}/(s+i+1)
             + int_R^inf x^s G dx,

where ``T_k`` is the Taylor polynomial of degree ``k - 1``. Orders with
``s + i + 1 = 0`` are skipped; they carry ``g_i = 0`` for the admissible
even/odd combinations. Near ``x = 0`` the remainder is replaced by its Taylor
tail, and on the rest of ``[0, R]`` the substitution ``u = x^{1+e}`` removes
the endpoint singularity.
"""

from __future__ import annotations

import math

import numpy as np

from ..quadrature import integrate
from .distribution import HomDistribution, PoleError, _exp_value
from .testfunc import SmoothnessError

__all__ = ["NonconvergentTailError", "regularized_pair", "DEFAULT_TOL", "subtraction_depth"]

DEFAULT_TOL = 1e-11
_TAIL_ORDERS = 10


class NonconvergentTailError(ValueError):
    """Unbounded support without the rapid-decay flag."""


def subtraction_depth(s: complex) -> int:
    """Number of Taylor orders subtracted for exponent ``s``.

    Chosen so that ``e = Re s + k`` lies in ``[0, 1)`` for ``Re s < 0``.
    """
    re = complex(s).real
    if re >= 0:
        return 0
    return int(math.ceil(-re - 1e-13))


_END_POWER = 4.0


def _integrate_from_end(weight, phi, anchor, other, tol):
    # x = anchor + sign * L u^4 with the offset handed to the test function
    # exactly, so singular factors at the anchor keep full precision
    length = abs(other - anchor)
    sign = 1.0 if other > anchor else -1.0

    def g(u):
        dist = length * u**_END_POWER
        x = anchor + sign * dist
        return weight(x) * phi.eval_from(anchor, sign, dist) * (_END_POWER * length * u ** (_END_POWER - 1))

    return integrate(g, 0.0, 1.0, tol=tol, rtol=tol)[0]


def _integrate_segment(weight, phi, a, b, singular_a, singular_b, tol):
    if a >= b:
        return 0.0
    if not (math.isfinite(a) and math.isfinite(b)) or not (singular_a or singular_b):
        return integrate(lambda x: weight(x) * phi(x), a, b, tol=tol, rtol=tol)[0]
    if singular_a and singular_b:
        m = 0.5 * (a + b)
        return (_integrate_from_end(weight, phi, a, m, tol)
                + _integrate_from_end(weight, phi, b, m, tol))
    if singular_a:
        return _integrate_from_end(weight, phi, a, b, tol)
    return _integrate_from_end(weight, phi, b, a, tol)


def _integrate_piecewise(weight, a, b, phi, tol):
    """Integrate ``weight * phi`` over ``[a, b]`` splitting at special points."""
    if a >= b:
        return 0.0
    sing = set(phi.singular_points)
    cuts = sorted({a, b, *[p for p in (*phi.breakpoints, *phi.singular_points) if a < p < b]})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _integrate_segment(weight, phi, lo, hi, lo in sing, hi in sing, tol)
    return total


def _near_radius(phi) -> float:
    lo, hi = phi.support
    r = min(1.0, phi.scale)
    for p in (lo, hi, *phi.breakpoints, *phi.singular_points):
        if p != 0.0 and math.isfinite(p):
            r = min(r, 0.5 * abs(p))
    return r


def _pair_group(s, cp: complex, cm: complex, phi, taylor, tol) -> complex:
    sv = _exp_value(s)
    lo, hi = phi.support
    contains0 = lo <= 0.0 <= hi

    def plus(x):
        return cp * np.exp(sv * np.log(x))

    def minus(x):
        return cm * np.exp(sv * np.log(-x))

    if not contains0 or sv.real >= 0:
        total = 0.0
        if cp != 0 and hi > 0:
            total += _integrate_piecewise(plus, max(lo, 0.0), hi, phi, tol)
        if cm != 0 and lo < 0:
            total += _integrate_piecewise(minus, lo, min(hi, 0.0), phi, tol)
        return total

    r0 = _near_radius(phi)
    k = subtraction_depth(sv)
    if phi.order < k - 1:
        raise SmoothnessError(f"exponent {s} needs {k - 1} derivatives at 0, test function has {phi.order}")
    jmax = min(k + _TAIL_ORDERS, phi.order, len(taylor) - 1)
    idx = np.arange(jmax + 1)
    g = (cp + (-1.0) ** idx * cm) * taylor[: jmax + 1]
    gscale = max(np.max(np.abs(g)), 1e-300)
    e = sv.real + k

    # boundary terms of the subtracted Taylor polynomial
    total = 0.0j
    for i in range(k):
        denom = sv + i + 1
        if denom == 0:
            if abs(g[i]) > 1e-10 * gscale:
                raise PoleError(f"pairing lands on a pole at s={s}")
            continue
        total += g[i] * np.exp((sv + i + 1) * math.log(r0)) / denom

    if jmax >= k:
        x_cut = 0.1 * r0
        for i in range(k, jmax + 1):
            total += g[i] * np.exp((sv + i + 1) * math.log(x_cut)) / (sv + i + 1)
    else:
        x_cut = 1e-3 * r0

    sub_idx = [i for i in range(k) if sv + i + 1 != 0]
    g_sub = g[sub_idx]
    sub_pow = np.array(sub_idx, dtype=float)

    def remainder_u(u):
        x = np.power(u, 1.0 / (1.0 + e))
        gx = cp * phi(x) + cm * phi(-x)
        if len(sub_idx):
            gx = gx - (x[:, None] ** sub_pow[None, :]) @ g_sub
        # x^s dx = x^{s-e} du / (1+e)
        return np.exp((sv - e) * np.log(x)) * gx / (1.0 + e)

    u_lo, u_hi = x_cut ** (1.0 + e), r0 ** (1.0 + e)
    # rounding in G - T_k is amplified by x^s near x_cut; do not ask for less
    fscale = (abs(cp) + abs(cm)) * max(np.max(np.abs(taylor[: jmax + 1])), 1e-300)
    floor = 100 * np.finfo(float).eps * fscale * x_cut ** (sv.real + 1.0)
    total += integrate(remainder_u, u_lo, u_hi, tol=max(tol, floor), rtol=tol)[0]

    if cp != 0 and hi > r0:
        total += _integrate_piecewise(plus, r0, hi, phi, tol)
    if cm != 0 and lo < -r0:
        total += _integrate_piecewise(minus, lo, -r0, phi, tol)
    return total


def regularized_pair(d: HomDistribution, phi, *, tol: float = DEFAULT_TOL) -> complex:
    """Finite-part pairing ``<d, phi>``.

    Parameters
    ----------
    d : HomDistribution
    phi : TestFunction1D
        Any object with the test-function surface (values, Taylor data at 0,
        support and special points).
    tol : float
        Absolute and relative quadrature target per integral.

    Returns
    -------
    complex

    Raises
    ------
    SmoothnessError
        ``phi`` lacks the derivatives the subtraction or delta terms need.
    NonconvergentTailError
        Unbounded support without the rapid-decay flag.
    """
    lo, hi = phi.support
    if (math.isinf(lo) or math.isinf(hi)) and not phi.schwartz:
        raise NonconvergentTailError("test function has unbounded support but no decay flag")

    need = d.max_delta_order
    for s, _ in d.exponent_groups():
        need = max(need, subtraction_depth(_exp_value(s)) + _TAIL_ORDERS)
    need = max(0, min(need, phi.order))
    if d.max_delta_order > phi.order:
        raise SmoothnessError(f"delta order {d.max_delta_order} exceeds test-function order {phi.order}")
    contains0 = lo <= 0.0 <= hi
    taylor = phi.taylor(need, 0.0) if contains0 else np.zeros(need + 1, dtype=complex)

    total = 0.0j
    for s, (cp, cm) in d.exponent_groups():
        total += _pair_group(s, cp, cm, phi, taylor, tol)
    for t in d.delta_terms:
        total += t.coeff * (-1) ** t.order * math.factorial(t.order) * taylor[t.order]
    return complex(total)
