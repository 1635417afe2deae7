"""Mass and curvature analysis of graphical asymptotically flat manifolds.

The library evaluates the mass of a manifold given as the graph of a
map f: R^n -> R^m by three independent routes (flux integral over large
spheres, bulk curvature integral, bulk plus boundary correction) and
numerically checks the tensor identities that make the routes agree.
"""

from .errors import (ConfigError, ConvergenceError, DomainError,
                     GraphMassError, NotSPDError, ParseError,
                     PreconditionError)
from .jets import (BallBoundary, DomainSpec, EllipsoidBoundary,
                   ExpressionSpec, FunctionSpec, GaussianBumpSpec, Jet2,
                   LinearSpec, RadialExpressionBoundary, RadialProfileSpec,
                   SchwarzschildSpec, SumSpec, VectorSpec, ZeroSpec,
                   domain_from_dict, eval_jet, fd_jet, parse_expression,
                   rotate_target, spec_from_dict)
from .geometry import (CurvatureSample, IdentityResiduals, Metric,
                       NormalGram, adm_integrand_graph, adm_integrand_metric,
                       algebraic_residuals, check_identities,
                       curvature_sample, divergence_residual, flux_divergence,
                       flux_field, induced_metric, normal_gram, normal_scalar,
                       normal_scalar_commutator, riemann_gauss,
                       scalar_curvature, scalar_curvature_intrinsic,
                       shape_operator)
from .quadrature import (ExteriorResult, HypersurfaceSample, SphereRule,
                         hypersurface_geometry, hypersurface_samples,
                         integrate_exterior, integrate_sphere, sphere_rule,
                         surface_area, total_mean_curvature,
                         unit_sphere_area)
from .mass import (DecayEstimate, MassReport, PowerFit, adm_mass_bulk,
                   adm_mass_surface, alexandrov_fenchel_check,
                   boundary_term_full, boundary_term_weighted,
                   decay_estimate, extrapolate_power_fit, mass_prefactor,
                   mass_report, penrose_check, superadditivity_check,
                   surface_estimates)

__version__ = "0.1.0"

__all__ = [
    "GraphMassError", "ConfigError", "NotSPDError", "DomainError",
    "ParseError", "PreconditionError", "ConvergenceError",
    "Jet2", "FunctionSpec", "ZeroSpec", "LinearSpec", "SchwarzschildSpec",
    "GaussianBumpSpec", "RadialProfileSpec", "ExpressionSpec", "SumSpec",
    "VectorSpec", "eval_jet", "fd_jet", "parse_expression", "rotate_target",
    "spec_from_dict", "DomainSpec", "BallBoundary", "EllipsoidBoundary",
    "RadialExpressionBoundary", "domain_from_dict",
    "Metric", "NormalGram", "CurvatureSample", "IdentityResiduals",
    "induced_metric", "normal_gram", "riemann_gauss", "scalar_curvature",
    "scalar_curvature_intrinsic", "shape_operator", "normal_scalar",
    "normal_scalar_commutator", "adm_integrand_graph", "adm_integrand_metric",
    "flux_field", "flux_divergence", "divergence_residual",
    "curvature_sample", "algebraic_residuals", "check_identities",
    "SphereRule", "sphere_rule", "unit_sphere_area", "integrate_sphere",
    "ExteriorResult", "integrate_exterior", "HypersurfaceSample",
    "hypersurface_geometry", "hypersurface_samples", "surface_area",
    "total_mean_curvature",
    "mass_prefactor", "surface_estimates", "PowerFit",
    "extrapolate_power_fit", "adm_mass_surface", "adm_mass_bulk",
    "boundary_term_weighted", "boundary_term_full", "penrose_check",
    "alexandrov_fenchel_check", "superadditivity_check", "DecayEstimate",
    "decay_estimate", "MassReport", "mass_report",
]
