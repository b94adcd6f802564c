"""Meromorphic families of powers and their residues at the poles."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distribution import HomDistribution, abs_power, delta, sign_power, x_minus, x_plus
from .pairing import regularized_pair

__all__ = [
    "MeromorphicFamily",
    "NotAPoleError",
    "ExtrapolationError",
    "residue",
    "residue_numeric_check",
]

_BUILDERS = {"x_plus": x_plus, "x_minus": x_minus, "abs": abs_power, "sign": sign_power}


class NotAPoleError(ValueError):
    """The requested point is not a pole of the family."""


class ExtrapolationError(RuntimeError):
    """Richardson levels disagree; the limit estimate is unreliable."""


@dataclass(frozen=True)
class MeromorphicFamily:
    """One of the named families ``x_+^s``, ``x_-^s``, ``|x|^s``, ``sign(x)|x|^s``.

    ``shift`` is added to ``s`` before building, so ``family(s)`` is the
    member at ``s + shift``.
    """

    name: str
    shift: complex = 0.0

    def __post_init__(self):
        if self.name not in _BUILDERS:
            raise ValueError(f"unknown family {self.name!r}; use one of {sorted(_BUILDERS)}")

    def __call__(self, s) -> HomDistribution:
        z = complex(s) + self.shift
        return _BUILDERS[self.name](z if z.imag else z.real)

    def is_pole(self, n: int) -> bool:
        """Whether ``s = -n`` (before the shift) is a pole, for integer ``n >= 1``."""
        z = -n + self.shift
        if complex(z).imag != 0 or n < 1:
            return False
        m = -complex(z).real
        if m != int(m) or m < 1:
            return False
        m = int(m)
        if self.name in ("x_plus", "x_minus"):
            return True
        if self.name == "abs":
            return m % 2 == 1
        return m % 2 == 0


def residue(fam: MeromorphicFamily, at: int) -> HomDistribution:
    """Residue of the family at ``s = at`` (a negative integer).

    ``x_+^s, x_-^s`` at ``-k``: ``(-/+1)^{k-1} delta^{(k-1)}/(k-1)!``;
    ``|x|^s`` at odd ``-k``: ``2 delta^{(k-1)}/(k-1)!``;
    ``sign(x)|x|^s`` at even ``-k``: ``-2 delta^{(k-1)}/(k-1)!``.
    """
    if not isinstance(at, int) or at >= 0 or not fam.is_pole(-at):
        raise NotAPoleError(f"s={at} is not a pole of {fam.name}")
    k = -at
    fact = math.factorial(k - 1)
    if fam.name == "x_plus":
        return delta(k - 1, (-1) ** (k - 1) / fact)
    if fam.name == "x_minus":
        return delta(k - 1, 1.0 / fact)
    if fam.name == "abs":
        return delta(k - 1, 2.0 / fact)
    return delta(k - 1, -2.0 / fact)


def residue_numeric_check(fam: MeromorphicFamily, at: int, phi, *, eps: float = 1e-2,
                          tol: float = 1e-13) -> float:
    """Discrepancy between ``lim (s - at) <fam(s), phi>`` and ``<residue, phi>``.

    The limit is estimated from ``g(e) = e <fam(at + e), phi>`` symmetrised in
    ``e`` and Richardson-extrapolated in ``e^2`` over three levels.
    """
    expected = regularized_pair(residue(fam, at), phi)

    def sym(e):
        gp = e * regularized_pair(fam(at + e), phi, tol=tol)
        gm = -e * regularized_pair(fam(at - e), phi, tol=tol)
        return 0.5 * (gp + gm)

    a0, a1, a2 = sym(eps), sym(eps / 2), sym(eps / 4)
    r1 = (4 * a1 - a0) / 3
    r2 = (4 * a2 - a1) / 3
    if abs(r1 - r2) > 1e-6 * (1 + abs(r2)):
        raise ExtrapolationError(f"Richardson levels disagree: {r1} vs {r2}")
    r = (16 * r2 - r1) / 15
    return float(abs(r - expected))
