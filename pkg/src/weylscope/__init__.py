"""Numerical toolkit for complex-valued Lipschitz-Killing curvatures in pseudo-Euclidean space."""

__version__ = "0.1.0"
