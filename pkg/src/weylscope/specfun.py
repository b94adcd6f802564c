"""Special functions behind the closed-form constants.

Gamma is evaluated with a Lanczos approximation (g=7, nine terms) and the
reflection formula for ``Re z < 1/2``.  Everything else (Beta, the sine-power
integral, unit-ball volumes) is routed through it.

The module also hosts :class:`HalfInteger`, the exact exponent type used for
the ``chi`` families, and the exact quarter-turn phase helpers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "GammaPoleError",
    "HalfInteger",
    "gamma",
    "rgamma",
    "beta",
    "sine_integral_S",
    "ball_volume",
    "sphere_area",
    "i_pow",
    "eighth_root",
    "cos_quarter",
    "sin_quarter",
]


class GammaPoleError(ValueError):
    """Raised when Gamma is requested at a nonpositive integer."""


_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _sinpi(z: complex) -> complex:
    # sin(pi z) with exact reduction of the real part, so that poles of Gamma
    # are approached without losing digits
    x, y = z.real, z.imag
    n = round(x)
    r = x - n
    sign = -1.0 if n % 2 else 1.0
    s = math.sin(math.pi * r)
    c = math.cos(math.pi * r)
    if y == 0.0:
        return complex(sign * s, 0.0)
    return complex(sign * s * math.cosh(math.pi * y), sign * c * math.sinh(math.pi * y))


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    x = _LANCZOS_COEFFS[0]
    for k in range(1, len(_LANCZOS_COEFFS)):
        x += _LANCZOS_COEFFS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def gamma(z):
    """Euler Gamma function for real or complex arguments.

    Parameters
    ----------
    z : float or complex
        Argument, not a nonpositive integer.

    Returns
    -------
    float or complex
        A float when ``z`` is real, otherwise a complex number.

    Raises
    ------
    GammaPoleError
        If ``z`` is ``0, -1, -2, ...``.
    """
    is_real = not isinstance(z, complex) or z.imag == 0.0
    zc = complex(z)
    if _is_nonpositive_integer(zc):
        raise GammaPoleError(f"Gamma has a pole at {z!r}")
    if is_real and zc.real == math.floor(zc.real) and zc.real <= 171:
        return float(math.factorial(int(zc.real) - 1))
    if zc.real < 0.5:
        val = math.pi / (_sinpi(zc) * _lanczos(1.0 - zc))
    else:
        val = _lanczos(zc)
    return val.real if is_real else val


def rgamma(z):
    """Reciprocal Gamma, returning exact zero at the poles."""
    zc = complex(z)
    if _is_nonpositive_integer(zc):
        return 0.0
    return 1.0 / gamma(z)


def beta(x, y):
    """Euler Beta function ``Gamma(x) Gamma(y) / Gamma(x + y)``."""
    return gamma(x) * gamma(y) * rgamma(x + y)


def sine_integral_S(a: int, b: int) -> float:
    """``S(a, b) = int_0^{pi/2} sin^a(t) cos^b(t) dt`` for integers ``a, b >= 0``."""
    if a < 0 or b < 0:
        raise ValueError("S(a, b) needs nonnegative integer exponents")
    lo, hi = sorted((a, b))
    return 0.5 * beta((lo + 1) / 2, (hi + 1) / 2)


def ball_volume(k: int) -> float:
    """Volume of the Euclidean unit ball in dimension ``k``."""
    if k < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (k / 2) / gamma(k / 2 + 1)


def sphere_area(k: int) -> float:
    """Area of the unit sphere ``S^k`` in ``R^{k+1}`` (``S^0`` has two points)."""
    return (k + 1) * ball_volume(k + 1)


@total_ordering
@dataclass(frozen=True)
class HalfInteger:
    """Exact number of the form ``twice / 2``.

    Integer versus proper half-integer questions are answered from the
    stored integer, never from floating point.
    """

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError("twice must be an int")

    @classmethod
    def of(cls, value) -> "HalfInteger":
        """Build from an int, a ``Fraction``, a HalfInteger, or a float that is a multiple of 1/2."""
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, int):
            return cls(2 * value)
        frac = Fraction(value).limit_denominator(4) if isinstance(value, float) else Fraction(value)
        if isinstance(value, float) and float(frac) != value:
            raise ValueError(f"{value!r} is not a half-integer")
        doubled = 2 * frac
        if doubled.denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(doubled))

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def value(self) -> float:
        return self.twice / 2

    def as_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def floor(self) -> int:
        return self.twice // 2

    def ceil(self) -> int:
        return -((-self.twice) // 2)

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self):
        return self.value

    def __neg__(self):
        return HalfInteger(-self.twice)

    def __add__(self, other):
        if isinstance(other, HalfInteger):
            return HalfInteger(self.twice + other.twice)
        if isinstance(other, int):
            return HalfInteger(self.twice + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (HalfInteger, int)):
            return self + (-HalfInteger.of(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInteger.of(other) - self
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, HalfInteger):
            return self.twice == other.twice
        if isinstance(other, int):
            return self.twice == 2 * other
        return NotImplemented

    def __hash__(self):
        return hash(("HalfInteger", self.twice))

    def __lt__(self, other):
        if isinstance(other, HalfInteger):
            return self.twice < other.twice
        if isinstance(other, (int, float)):
            return self.value < other
        return NotImplemented

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInteger({self})"


# exact values of cos/sin at multiples of pi/4
_R = math.sqrt(0.5)
_EIGHTH = (
    (1.0, 0.0),
    (_R, _R),
    (0.0, 1.0),
    (-_R, _R),
    (-1.0, 0.0),
    (-_R, -_R),
    (0.0, -1.0),
    (_R, -_R),
)


def i_pow(n: int) -> complex:
    """``i**n`` for an integer ``n`` by quarter-turn table lookup."""
    return (1, 1j, -1, -1j)[n % 4]


def eighth_root(n: int) -> complex:
    """``exp(i pi n / 4)`` from an exact table."""
    c, s = _EIGHTH[n % 8]
    return complex(c, s)


def cos_quarter(s: HalfInteger) -> float:
    """``cos(pi s / 2)`` for half-integer ``s`` (angle ``twice * pi / 4``)."""
    return _EIGHTH[s.twice % 8][0]


def sin_quarter(s: HalfInteger) -> float:
    """``sin(pi s / 2)`` for half-integer ``s``."""
    return _EIGHTH[s.twice % 8][1]
