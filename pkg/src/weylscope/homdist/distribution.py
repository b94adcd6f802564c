"""Finite combinations of one-sided powers and delta derivatives on the line."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Union

from ..specfun import HalfInteger

__all__ = [
    "PoleError",
    "PowerTerm",
    "DeltaTerm",
    "HomDistribution",
    "x_plus",
    "x_minus",
    "abs_power",
    "sign_power",
    "x_power",
    "delta",
    "constant",
    "chi",
    "chi_eval_pm1",
]

Exponent = Union[HalfInteger, float, complex]

# coefficients below this (relative to the largest in a distribution) are
# treated as cancellation residue
_COEFF_EPS = 1e-14


class PoleError(ValueError):
    """A power term sits on a pole of its meromorphic family."""


def _as_exponent(s) -> Exponent:
    if isinstance(s, HalfInteger):
        return s
    if isinstance(s, int):
        return HalfInteger.of(s)
    if isinstance(s, complex):
        if s.imag == 0.0:
            s = s.real
        else:
            return s
    s = float(s)
    if 2 * s == math.floor(2 * s) and abs(s) < 1e6:
        return HalfInteger.of(s)
    return s


def _exp_value(s: Exponent) -> complex:
    return complex(s.value) if isinstance(s, HalfInteger) else complex(s)


def _exp_key(s: Exponent):
    if isinstance(s, HalfInteger):
        return (0, s.twice, 0.0)
    c = complex(s)
    return (1, c.real, c.imag)


def negative_integer(s: Exponent) -> int | None:
    """Return ``n > 0`` if ``s == -n`` exactly, else ``None``."""
    if isinstance(s, HalfInteger) and s.is_integer and s.twice < 0:
        return -s.as_int()
    return None


@dataclass(frozen=True)
class PowerTerm:
    """``coeff * x_side^exponent`` with ``side`` in ``{"plus", "minus"}``."""

    side: str
    exponent: Exponent
    coeff: complex

    def __post_init__(self):
        if self.side not in ("plus", "minus"):
            raise ValueError(f"side must be 'plus' or 'minus', got {self.side!r}")


@dataclass(frozen=True)
class DeltaTerm:
    """``coeff * delta_0^{(order)}``."""

    order: int
    coeff: complex

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("delta order must be nonnegative")


class HomDistribution:
    """Canonical sum of power terms and delta terms.

    At most one term per ``(side, exponent)`` and per delta order is kept.
    Negative-integer exponents are only accepted in the pole-free even/odd
    combination (``|x|^s`` for even ``s``, ``sign(x)|x|^s`` for odd ``s``).
    """

    __slots__ = ("_powers", "_deltas")

    def __init__(self, power_terms: Iterable[PowerTerm] = (), delta_terms: Iterable[DeltaTerm] = ()):
        powers: dict = {}
        for t in power_terms:
            s = _as_exponent(t.exponent)
            key = (t.side, _exp_key(s))
            prev = powers.get(key)
            coeff = complex(t.coeff) + (prev[1] if prev else 0.0)
            powers[key] = (s, coeff)
        deltas: dict = {}
        for t in delta_terms:
            deltas[t.order] = deltas.get(t.order, 0.0) + complex(t.coeff)
        scale = max([abs(c) for _, c in powers.values()] + [abs(c) for c in deltas.values()] + [0.0])
        cut = _COEFF_EPS * scale
        self._powers = {k: v for k, v in sorted(powers.items(), key=lambda kv: (kv[0][1], kv[0][0])) if abs(v[1]) > cut}
        self._deltas = {k: v for k, v in sorted(deltas.items()) if abs(v) > cut}
        self._check_poles()

    def _check_poles(self):
        for s, (cp, cm) in self.exponent_groups():
            n = negative_integer(s)
            if n is None:
                continue
            # even part multiplies |x|^s, odd part sign(x)|x|^s
            even, odd = 0.5 * (cp + cm), 0.5 * (cp - cm)
            bad = even if n % 2 == 1 else odd
            if abs(bad) > 1e-12 * max(abs(cp), abs(cm)):
                raise PoleError(
                    f"x_+/- power with exponent {s} is only defined inside the "
                    f"{'odd' if n % 2 else 'even'} combination"
                )

    @property
    def power_terms(self) -> list[PowerTerm]:
        return [PowerTerm(side, s, c) for (side, _), (s, c) in self._powers.items()]

    @property
    def delta_terms(self) -> list[DeltaTerm]:
        return [DeltaTerm(k, c) for k, c in self._deltas.items()]

    def exponent_groups(self):
        """Yield ``(exponent, (coeff_plus, coeff_minus))`` per distinct exponent."""
        groups: dict = {}
        for (side, key), (s, c) in self._powers.items():
            entry = groups.setdefault(key, [s, 0.0j, 0.0j])
            entry[1 if side == "plus" else 2] += c
        for key in sorted(groups):
            s, cp, cm = groups[key]
            yield s, (cp, cm)

    @property
    def max_delta_order(self) -> int:
        return max(self._deltas, default=-1)

    def is_zero(self) -> bool:
        return not self._powers and not self._deltas

    # arithmetic ------------------------------------------------------------

    def __add__(self, other: "HomDistribution") -> "HomDistribution":
        if not isinstance(other, HomDistribution):
            return NotImplemented
        return HomDistribution(self.power_terms + other.power_terms, self.delta_terms + other.delta_terms)

    def __mul__(self, c) -> "HomDistribution":
        c = complex(c)
        return HomDistribution(
            [PowerTerm(t.side, t.exponent, c * t.coeff) for t in self.power_terms],
            [DeltaTerm(t.order, c * t.coeff) for t in self.delta_terms],
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def reflect(self) -> "HomDistribution":
        """Pull back by ``x -> -x``."""
        return HomDistribution(
            [PowerTerm("minus" if t.side == "plus" else "plus", t.exponent, t.coeff) for t in self.power_terms],
            [DeltaTerm(t.order, (-1) ** t.order * t.coeff) for t in self.delta_terms],
        )

    def allclose(self, other: "HomDistribution", rtol=1e-12, atol=1e-14) -> bool:
        """Coefficient-level comparison."""
        diff = self - other
        scale = max([abs(t.coeff) for t in self.power_terms + other.power_terms]
                    + [abs(t.coeff) for t in self.delta_terms + other.delta_terms] + [0.0])
        worst = max([abs(t.coeff) for t in diff.power_terms] + [abs(t.coeff) for t in diff.delta_terms] + [0.0])
        return worst <= atol + rtol * scale

    def __eq__(self, other):
        if not isinstance(other, HomDistribution):
            return NotImplemented
        return self.power_terms == other.power_terms and self.delta_terms == other.delta_terms

    def __repr__(self):
        parts = []
        for t in self.power_terms:
            parts.append(f"({t.coeff:.6g})*x_{'+' if t.side == 'plus' else '-'}^{t.exponent}")
        for t in self.delta_terms:
            parts.append(f"({t.coeff:.6g})*delta^({t.order})")
        return "HomDistribution(" + (" + ".join(parts) or "0") + ")"

    # pointwise evaluation away from the origin -----------------------------

    def __call__(self, x):
        """Evaluate as a function on ``x != 0`` (delta terms vanish there)."""
        import numpy as np

        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            for t in self.power_terms:
                mask = x > 0 if t.side == "plus" else x < 0
                s = _exp_value(t.exponent)
                out = out + np.where(mask, t.coeff * np.power(ax.astype(complex), s), 0.0)
        return out

    # serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        powers = []
        for t in self.power_terms:
            if not isinstance(t.exponent, HalfInteger):
                raise TypeError("only half-integer exponents are serializable")
            num, den = (t.exponent.twice // 2, 1) if t.exponent.is_integer else (t.exponent.twice, 2)
            powers.append({"side": t.side, "exp_num": num, "exp_den": den,
                           "coeff_re": t.coeff.real, "coeff_im": t.coeff.imag})
        deltas = [{"order": t.order, "coeff_re": t.coeff.real, "coeff_im": t.coeff.imag}
                  for t in self.delta_terms]
        return {"power_terms": powers, "delta_terms": deltas}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "HomDistribution":
        from fractions import Fraction

        powers = [PowerTerm(p["side"], HalfInteger.of(Fraction(p["exp_num"], p["exp_den"])),
                            complex(p["coeff_re"], p["coeff_im"])) for p in data.get("power_terms", [])]
        deltas = [DeltaTerm(int(d["order"]), complex(d["coeff_re"], d["coeff_im"]))
                  for d in data.get("delta_terms", [])]
        return cls(powers, deltas)

    @classmethod
    def from_json(cls, text: str) -> "HomDistribution":
        return cls.from_dict(json.loads(text))


# constructors ---------------------------------------------------------------

def x_plus(s, coeff=1.0) -> HomDistribution:
    return HomDistribution([PowerTerm("plus", _as_exponent(s), coeff)])


def x_minus(s, coeff=1.0) -> HomDistribution:
    return HomDistribution([PowerTerm("minus", _as_exponent(s), coeff)])


def abs_power(s, coeff=1.0) -> HomDistribution:
    """``|x|^s = x_+^s + x_-^s``."""
    s = _as_exponent(s)
    return HomDistribution([PowerTerm("plus", s, coeff), PowerTerm("minus", s, coeff)])


def sign_power(s, coeff=1.0) -> HomDistribution:
    """``sign(x)|x|^s = x_+^s - x_-^s``."""
    s = _as_exponent(s)
    return HomDistribution([PowerTerm("plus", s, coeff), PowerTerm("minus", s, -complex(coeff))])


def x_power(k: int, coeff=1.0) -> HomDistribution:
    """``x^k``: ``|x|^k`` for even ``k`` and ``sign(x)|x|^k`` for odd ``k``."""
    return abs_power(k, coeff) if k % 2 == 0 else sign_power(k, coeff)


def delta(order: int = 0, coeff=1.0) -> HomDistribution:
    return HomDistribution([], [DeltaTerm(order, coeff)])


def constant(c=1.0) -> HomDistribution:
    return x_power(0, c)


def chi(i: int, s) -> HomDistribution:
    """The homogeneous family ``chi_i^s`` for half-integer ``s < 0``.

    Half-integer ``s``: ``chi_0 = x_+^s`` and ``chi_1 = (-1)^(s+1/2) x_-^s``.
    Integer ``s``: ``chi_0 = x^s`` and
    ``chi_1 = (-1)^(s+1) pi / (-s-1)! * delta^(-s-1)``.
    """
    s = HalfInteger.of(s)
    if s.twice >= 0:
        raise ValueError(f"chi_i^s needs s < 0, got {s}")
    i = i % 2
    if not s.is_integer:
        if i == 0:
            return x_plus(s)
        return x_minus(s, (-1) ** ((s + HalfInteger(1)).as_int() % 2))
    n = s.as_int()
    if i == 0:
        return x_power(n)
    k = -n - 1
    return delta(k, (-1) ** ((n + 1) % 2) * math.pi / math.factorial(k))


def chi_eval_pm1(i: int, s, sign: int) -> int:
    """Point value of ``chi_i^s`` at ``+1`` or ``-1``.

    ``chi_i^s(1) = [i == 0]`` and
    ``chi_i^s(-1) = (-1)^floor(s + 1/2) * [2s == i mod 2]``.
    Indices are compared modulo 2.
    """
    s = HalfInteger.of(s)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    i = i % 2
    if sign == 1:
        return 1 if i == 0 else 0
    if s.twice % 2 != i:
        return 0
    return -1 if (s + HalfInteger(1)).floor() % 2 else 1
