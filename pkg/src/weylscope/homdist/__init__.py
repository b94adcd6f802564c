"""Homogeneous distributions on the line: construction, pairing, residues, Fourier."""

from .distribution import (
    DeltaTerm,
    HomDistribution,
    PoleError,
    PowerTerm,
    abs_power,
    chi,
    chi_eval_pm1,
    constant,
    delta,
    sign_power,
    x_minus,
    x_plus,
    x_power,
)
from .fourier import TablePoleError, chi_fourier_alpha, fourier, fourier_duality_check
from .pairing import NonconvergentTailError, regularized_pair, subtraction_depth
from .residues import ExtrapolationError, MeromorphicFamily, NotAPoleError, residue, residue_numeric_check
from .testfunc import Bump, GaussPoly, PowerProduct, SmoothnessError, TestFunction1D

__all__ = [
    "Bump", "DeltaTerm", "ExtrapolationError", "GaussPoly", "HomDistribution", "MeromorphicFamily",
    "NonconvergentTailError", "NotAPoleError", "PoleError", "PowerProduct", "PowerTerm",
    "SmoothnessError", "TablePoleError", "TestFunction1D", "abs_power", "chi", "chi_eval_pm1",
    "chi_fourier_alpha", "constant", "delta", "fourier", "fourier_duality_check",
    "regularized_pair", "residue", "residue_numeric_check", "sign_power", "subtraction_depth",
    "x_minus", "x_plus", "x_power",
]
