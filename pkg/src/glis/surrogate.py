"""IDW and RBF interpolation surrogates."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CoincidentPoint, DuplicatePoint
from .numerics import svd_truncated_solve
from .sampling import SampleSet

DEFAULT_EPS_SVD = 1e-6


@dataclass(frozen=True)
class IdwWeightKind:
    """Weighting for IDW: plain inverse squared distance, or the variant
    damped by exp(-d^2) so remote samples fade out."""

    variant: str = "inverse_squared"

    def __post_init__(self):
        if self.variant not in kernels.IDW_KIND_CODES:
            raise ValueError(f"unknown IDW weight kind {self.variant!r}")

    @property
    def code(self) -> int:
        return kernels.IDW_KIND_CODES[self.variant]


@dataclass(frozen=True)
class RbfKind:
    variant: str = "inverse_quadratic"
    epsilon: float = 1.0

    def __post_init__(self):
        if self.variant not in kernels.RBF_KIND_CODES:
            raise ValueError(f"unknown RBF kind {self.variant!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def code(self) -> int:
        return kernels.RBF_KIND_CODES[self.variant]


def idw_weight(x, xi, kind: IdwWeightKind) -> float:
    """Single IDW weight w_i(x); undefined at x == xi."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    d2 = float(np.sum((x - xi) ** 2))
    if d2 == 0.0:
        raise CoincidentPoint("weight is undefined at the sample itself")
    d2 = max(d2, kernels.DSQ_FLOOR)
    if kind.variant == "inverse_squared":
        return 1.0 / d2
    return float(np.exp(-d2) / d2)


def idw_predict(samples: SampleSet, x, kind: IdwWeightKind) -> float:
    """IDW interpolant value at x; exact sample values at the samples."""
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    xq = np.atleast_2d(np.asarray(x, dtype=float))
    return float(kernels.idw_predict_batch(xq, samples.X, samples.F, kind.code)[0])


def rbf_kernel(kind: RbfKind, d: float) -> float:
    """Radial basis value phi(epsilon * d); thin plate spline uses its limit
    value 0 at d = 0."""
    if d < 0:
        raise ValueError("distance must be nonnegative")
    return float(
        kernels.kernel_cross(
            np.array([[0.0]]), np.array([[float(d)]]), kind.code, kind.epsilon
        )[0, 0]
    )


@dataclass(frozen=True)
class RbfModel:
    kind: RbfKind
    samples: SampleSet
    beta: np.ndarray
    eps_svd: float
    kernel_matrix: np.ndarray


def rbf_fit(samples: SampleSet, kind: RbfKind, eps_svd: float = DEFAULT_EPS_SVD) -> RbfModel:
    """Fit RBF coefficients through the truncated-SVD solve of the kernel
    system; points must be pairwise distinct."""
    m = kernels.kernel_matrix(samples.X, kind.code, kind.epsilon)
    beta = svd_truncated_solve(m, samples.F, eps_svd)
    return RbfModel(kind, samples, beta, eps_svd, m)


def rbf_update(model: RbfModel, x_new, f_new: float) -> RbfModel:
    """Refit after one new sample, growing the cached kernel matrix by one
    row/column. Identical to a from-scratch fit on the enlarged set."""
    x_new = np.asarray(x_new, dtype=float).reshape(1, -1)
    old = model.samples
    if np.any(np.all(old.X == x_new, axis=1)):
        raise DuplicatePoint("point already sampled")
    row = kernels.kernel_cross(x_new, old.X, model.kind.code, model.kind.epsilon)
    diag = kernels.kernel_matrix(x_new, model.kind.code, model.kind.epsilon)
    n = len(old)
    m = np.empty((n + 1, n + 1))
    m[:n, :n] = model.kernel_matrix
    m[n, :n] = row[0]
    m[:n, n] = row[0]
    m[n, n] = diag[0, 0]
    samples = SampleSet(np.vstack([old.X, x_new]), np.append(old.F, float(f_new)))
    beta = svd_truncated_solve(m, samples.F, model.eps_svd)
    return RbfModel(model.kind, samples, beta, model.eps_svd, m)


def rbf_predict(model: RbfModel, x) -> float:
    xq = np.atleast_2d(np.asarray(x, dtype=float))
    k = kernels.kernel_cross(xq, model.samples.X, model.kind.code, model.kind.epsilon)
    return float(k[0] @ model.beta)


def rbf_predict_batch(model: RbfModel, xq) -> np.ndarray:
    xq = np.atleast_2d(np.asarray(xq, dtype=float))
    k = kernels.kernel_cross(xq, model.samples.X, model.kind.code, model.kind.epsilon)
    return k @ model.beta
