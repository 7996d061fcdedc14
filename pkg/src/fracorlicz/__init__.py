"""Computable fractional Orlicz-Sobolev toolkit.

Young-function calculus (conjugates, doubling, integrability, Sobolev
conjugates), Orlicz norms on grids, fractional modulars and seminorms with
singular-kernel quadrature, the associated nonlocal operator and Dirichlet
solver, and numerical checks for the standard inequalities.
"""

from .errors import (ToolkitError, ConfigError, RangeError,
                     DegenerateInputError, PreconditionError,
                     ResolutionError, DivergenceError, NonConvergenceError)
from .nfunction import NFunction, IntegrabilityResult, GrowthEstimate, dominance_ratio
from .domain import (Domain, GridFunction, QuadratureRule, integrate,
                     double_integrate, ladder_extrapolate, mollifier_kernel,
                     mollify, make_test_function)
from .orlicz import modular, luxemburg_norm, orlicz_norm_amemiya, holder_gap
from .fracspace import (FracParams, ModularReport, frac_modular,
                        gagliardo_seminorm, orlicz_gagliardo_seminorm,
                        frac_norm)
from .wsp import lp_norm, wsp_seminorm, wsp_norm
from .operator import (apply_pv, apply_pv_field, weak_pairing,
                       p_laplacian_reference, p_laplacian_field,
                       halo_sensitivity)
from .solver import (DirichletProblem, SolverConfig, SolveResult, solve,
                     dense_oracle, energy, gradient, monotonicity_probe,
                     coercivity_probe)
from .verify import (bump_family, poincare_ratio, embedding_ratio,
                     norm_equivalence, ws1_embedding, lipschitz_composition,
                     mollifier_convergence, compact_embedding_evidence)
from ._backend import backend_name, available_backends

__version__ = "0.1.0"

__all__ = [
    "ToolkitError", "ConfigError", "RangeError", "DegenerateInputError",
    "PreconditionError", "ResolutionError", "DivergenceError",
    "NonConvergenceError",
    "NFunction", "IntegrabilityResult", "GrowthEstimate", "dominance_ratio",
    "Domain", "GridFunction", "QuadratureRule", "integrate",
    "double_integrate", "ladder_extrapolate", "mollifier_kernel", "mollify",
    "make_test_function",
    "modular", "luxemburg_norm", "orlicz_norm_amemiya", "holder_gap",
    "FracParams", "ModularReport", "frac_modular", "gagliardo_seminorm",
    "orlicz_gagliardo_seminorm", "frac_norm",
    "lp_norm", "wsp_seminorm", "wsp_norm",
    "apply_pv", "apply_pv_field", "weak_pairing", "p_laplacian_reference",
    "p_laplacian_field", "halo_sensitivity",
    "DirichletProblem", "SolverConfig", "SolveResult", "solve",
    "dense_oracle", "energy", "gradient", "monotonicity_probe",
    "coercivity_probe",
    "bump_family", "poincare_ratio", "embedding_ratio", "norm_equivalence",
    "ws1_embedding", "lipschitz_composition", "mollifier_convergence",
    "compact_embedding_evidence",
    "backend_name", "available_backends",
    "__version__",
]
