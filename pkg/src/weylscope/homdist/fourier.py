"""Fourier transform ``F f(xi) = int exp(-i xi x) f(x) dx`` on the table of powers."""

from __future__ import annotations

import math

import numpy as np

from ..specfun import HalfInteger, cos_quarter, eighth_root, gamma, i_pow, rgamma, sin_quarter
from .distribution import HomDistribution, abs_power, delta, sign_power, x_power
from .pairing import regularized_pair

__all__ = ["TablePoleError", "fourier", "fourier_duality_check", "chi_fourier_alpha"]


class TablePoleError(ValueError):
    """A table coefficient sits on a pole of Gamma."""


def _gamma_finite(z: float) -> bool:
    return not (z <= 0 and z == math.floor(z))


def _fourier_even(s: HalfInteger) -> HomDistribution:
    """``F(|x|^s)``."""
    if s.is_integer and s.twice >= 0 and s.as_int() % 2 == 0:
        k = s.as_int()
        return delta(k, 2 * math.pi * i_pow(k))
    out_exp = -s - 1
    sin_val = sin_quarter(s)
    if _gamma_finite(s.value + 1) and sin_val != 0.0:
        c = -2.0 * sin_val * gamma(s.value + 1)
    else:
        cos_val = cos_quarter(s)
        if cos_val == 0.0 or not _gamma_finite(-s.value):
            raise TablePoleError(f"F(|x|^{s}) has no table value")
        c = math.pi / cos_val * rgamma(-s.value)
    return abs_power(out_exp, c)


def _fourier_odd(s: HalfInteger) -> HomDistribution:
    """``F(sign(x)|x|^s)``."""
    if s.is_integer and s.twice >= 0 and s.as_int() % 2 == 1:
        k = s.as_int()
        return delta(k, 2 * math.pi * i_pow(k))
    out_exp = -s - 1
    cos_val = cos_quarter(s)
    if _gamma_finite(s.value + 1) and cos_val != 0.0:
        c = -2j * cos_val * gamma(s.value + 1)
    else:
        sin_val = sin_quarter(s)
        if sin_val == 0.0 or not _gamma_finite(-s.value):
            raise TablePoleError(f"F(sign(x)|x|^{s}) has no table value")
        c = 1j * math.pi / sin_val * rgamma(-s.value)
    return sign_power(out_exp, c)


def fourier(d: HomDistribution) -> HomDistribution:
    """Apply the Fourier table termwise.

    Each power group ``c_+ x_+^s + c_- x_-^s`` is split into its even part
    ``|x|^s`` and odd part ``sign(x)|x|^s``; delta derivatives map to monomials.

    Raises
    ------
    TablePoleError
        A coefficient of the table would need Gamma at a pole.
    TypeError
        An exponent is not a half-integer.
    """
    out = HomDistribution()
    for s, (cp, cm) in d.exponent_groups():
        if not isinstance(s, HalfInteger):
            raise TypeError("the Fourier table covers half-integer exponents only")
        even, odd = 0.5 * (cp + cm), 0.5 * (cp - cm)
        if even != 0:
            out = out + even * _fourier_even(s)
        if odd != 0:
            out = out + odd * _fourier_odd(s)
    for t in d.delta_terms:
        out = out + x_power(t.order, t.coeff * i_pow(t.order))
    return out


def chi_fourier_alpha(i: int, s) -> complex:
    """Coefficient of ``xi_+^{-s-1}`` in ``F(chi_i^s)`` for half-integer ``s < 0``.

    Equals ``pi / Gamma(-s) * exp(i pi s / 2)`` times ``i^i``.
    """
    s = HalfInteger.of(s)
    phase = eighth_root(s.twice)  # exp(i pi s / 2) = exp(i pi (2s) / 4)
    return math.pi * rgamma(-s.value) * phase * i_pow(i % 2)


def fourier_duality_check(d: HomDistribution, phi, *, tol: float = 1e-12) -> float:
    """``|<F d, phi> - <d, F phi>|`` for a test function with a closed-form transform."""
    if not hasattr(phi, "fourier"):
        raise TypeError("test function has no analytic Fourier transform")
    lhs = regularized_pair(fourier(d), phi, tol=tol)
    rhs = regularized_pair(d, phi.fourier(), tol=tol)
    return float(np.abs(lhs - rhs))
