"""Global optimization of expensive black-box functions using IDW/RBF
surrogates with an IDW-based exploration acquisition."""

from .acquisition import (
    AcquisitionParams,
    acquisition,
    idw_distance,
    idw_variance,
    penalized_acquisition,
)
from .errors import GlisError
from .kernels import BACKEND
from .numerics import LpProblem, solve_lp, spd_solve, svd_truncated_solve
from .optimizer import (
    GlisConfig,
    GlisResult,
    GlisState,
    PsoConfig,
    glis_init,
    glis_observe,
    glis_run,
    glis_suggest,
    pso_minimize,
)
from .problem import ProblemSpec, ScalingMap, build_scaling, tighten_bounds
from .sampling import SampleSet, chebyshev_radius, constrained_lhs, latin_hypercube
from .surrogate import (
    IdwWeightKind,
    RbfKind,
    RbfModel,
    idw_predict,
    idw_weight,
    rbf_fit,
    rbf_kernel,
    rbf_predict,
    rbf_update,
)

__all__ = [
    "AcquisitionParams",
    "BACKEND",
    "GlisConfig",
    "GlisError",
    "GlisResult",
    "GlisState",
    "IdwWeightKind",
    "LpProblem",
    "ProblemSpec",
    "PsoConfig",
    "RbfKind",
    "RbfModel",
    "SampleSet",
    "ScalingMap",
    "acquisition",
    "build_scaling",
    "chebyshev_radius",
    "constrained_lhs",
    "glis_init",
    "glis_observe",
    "glis_run",
    "glis_suggest",
    "idw_distance",
    "idw_predict",
    "idw_variance",
    "idw_weight",
    "latin_hypercube",
    "penalized_acquisition",
    "pso_minimize",
    "rbf_fit",
    "rbf_kernel",
    "rbf_predict",
    "rbf_update",
    "solve_lp",
    "spd_solve",
    "svd_truncated_solve",
    "tighten_bounds",
]

__version__ = "0.1.0"
