"""Exploration terms s(x) and z(x) and the acquisition function built on them."""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .problem import ProblemSpec
from .sampling import SampleSet
from .surrogate import IdwWeightKind, RbfModel, rbf_predict_batch

DEFAULT_EPS_DELTA_F = 1e-6
DEFAULT_PENALTY_RHO = 1000.0


@dataclass(frozen=True)
class AcquisitionParams:
    alpha: float = 1.0
    delta: float = 0.5
    eps_delta_f: float = DEFAULT_EPS_DELTA_F
    idw_kind: IdwWeightKind = field(default_factory=IdwWeightKind)
    penalty_rho: float = DEFAULT_PENALTY_RHO

    def __post_init__(self):
        if self.alpha < 0 or self.delta < 0:
            raise ValueError("alpha and delta must be nonnegative")
        if not self.eps_delta_f > 0 or not self.penalty_rho > 0:
            raise ValueError("eps_delta_f and penalty_rho must be positive")


def sample_range(f_values, eps_delta_f: float = DEFAULT_EPS_DELTA_F) -> float:
    """Observed spread of objective values, floored to stay positive."""
    f_values = np.asarray(f_values, dtype=float)
    return max(float(f_values.max() - f_values.min()), eps_delta_f)


def idw_variance(samples: SampleSet, surrogate_value: float, x, kind: IdwWeightKind) -> float:
    """Weighted spread of the sample values around the surrogate value;
    zero at samples when the surrogate interpolates exactly."""
    xq = np.atleast_2d(np.asarray(x, dtype=float))
    fhat = np.array([float(surrogate_value)])
    s, _ = kernels.explore_terms_batch(xq, samples.X, samples.F, fhat, kind.code)
    return float(s[0])


def idw_distance(samples: SampleSet, x, kind: IdwWeightKind) -> float:
    """Pure exploration term: zero at the samples, saturating toward 1 far
    from all of them."""
    xq = np.atleast_2d(np.asarray(x, dtype=float))
    fhat = np.zeros(1)
    _, z = kernels.explore_terms_batch(xq, samples.X, samples.F, fhat, kind.code)
    return float(z[0])


def _surrogate_values(surrogate, samples: SampleSet, xq: np.ndarray, idw_kind) -> np.ndarray:
    if isinstance(surrogate, RbfModel):
        return rbf_predict_batch(surrogate, xq)
    return kernels.idw_predict_batch(xq, samples.X, samples.F, idw_kind.code)


def acquisition_batch(surrogate, samples: SampleSet, xq, params: AcquisitionParams) -> np.ndarray:
    """a(x) = fhat(x) - alpha s(x) - delta dF z(x) for a batch of points."""
    xq = np.atleast_2d(np.asarray(xq, dtype=float))
    fhat = _surrogate_values(surrogate, samples, xq, params.idw_kind)
    s, z = kernels.explore_terms_batch(xq, samples.X, samples.F, fhat, params.idw_kind.code)
    d_f = sample_range(samples.F, params.eps_delta_f)
    return fhat - params.alpha * s - params.delta * d_f * z


def acquisition(surrogate, samples: SampleSet, x, params: AcquisitionParams) -> float:
    return float(acquisition_batch(surrogate, samples, np.atleast_2d(x), params)[0])


def penalized_acquisition(
    x, params: AcquisitionParams, spec: ProblemSpec, surrogate, samples: SampleSet
) -> float:
    """Acquisition plus the quadratic penalty on violated constraints."""
    base = acquisition(surrogate, samples, x, params)
    g = spec.constraint_values(x)
    if g.size == 0:
        return base
    d_f = sample_range(samples.F, params.eps_delta_f)
    return base + params.penalty_rho * d_f * float(np.sum(np.maximum(g, 0.0) ** 2))
