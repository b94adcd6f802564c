"""Pseudo-Riemannian geometry of immersed manifolds in R^{p,q}."""

from .ambient import AmbientSpace, q_orthonormal_frame, signature_at
from .catalog import CatalogError, PlanarDomain, build, build_metric, default_ambient, parse_target
from .checks import HypersurfaceSample, LCVerdict, hypersurface_data, lc_regular_check, lc_transversal_hypersurface_check
from .curvature import (
    CurvatureTensorField,
    DegenerateMetricError,
    curvature_tensor,
    egregium_check,
    extrinsic_gauss_curvature,
    riemann_batch,
)
from .manifold import MetricField, OutOfDomainError, ParametricManifold, lambdify_array

__all__ = [
    "AmbientSpace", "q_orthonormal_frame", "signature_at",
    "CatalogError", "PlanarDomain", "build", "build_metric", "default_ambient", "parse_target",
    "HypersurfaceSample", "LCVerdict", "hypersurface_data", "lc_regular_check", "lc_transversal_hypersurface_check",
    "CurvatureTensorField", "DegenerateMetricError", "curvature_tensor", "egregium_check",
    "extrinsic_gauss_curvature", "riemann_batch",
    "MetricField", "OutOfDomainError", "ParametricManifold", "lambdify_array",
]
