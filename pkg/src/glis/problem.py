"""Problem definition, bound tightening, and affine rescaling to [-1, 1]."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateBox, DimensionMismatch, Infeasible, InfeasibleConstraints
from .numerics import LpProblem, solve_lp

CONSTRAINT_TOL = 1e-9


@dataclass(frozen=True)
class ProblemSpec:
    """A box-bounded minimization problem with optional linear constraints
    (lin_a @ x <= lin_b) and an optional black-box constraint function
    returning values that must be <= 0.

    eval_outside_feasible: True when the objective can be evaluated at
    infeasible points (initial designs then need not be filtered).
    """

    lower: np.ndarray
    upper: np.ndarray
    objective: Callable[[np.ndarray], float] | None = None
    lin_a: np.ndarray | None = None
    lin_b: np.ndarray | None = None
    constraint_fn: Callable[[np.ndarray], np.ndarray] | None = None
    eval_outside_feasible: bool = True

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        up = np.asarray(self.upper, dtype=float)
        if lo.shape != up.shape or lo.ndim != 1:
            raise DimensionMismatch("lower/upper must be 1-D vectors of equal length")
        if not np.all(lo < up):
            raise DegenerateBox("lower must be strictly below upper componentwise")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if (self.lin_a is None) != (self.lin_b is None):
            raise DimensionMismatch("lin_a and lin_b must be given together")
        if self.lin_a is not None:
            a = np.atleast_2d(np.asarray(self.lin_a, dtype=float))
            b = np.asarray(self.lin_b, dtype=float)
            if a.shape != (len(b), len(lo)):
                raise DimensionMismatch("linear constraint dimensions are inconsistent")
            object.__setattr__(self, "lin_a", a)
            object.__setattr__(self, "lin_b", b)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def has_constraints(self) -> bool:
        return self.lin_a is not None or self.constraint_fn is not None

    def constraint_values(self, x) -> np.ndarray:
        """Stacked constraint function values g(x) (feasible iff all <= 0)."""
        x = np.asarray(x, dtype=float)
        parts = []
        if self.lin_a is not None:
            parts.append(self.lin_a @ x - self.lin_b)
        if self.constraint_fn is not None:
            parts.append(np.atleast_1d(np.asarray(self.constraint_fn(x), dtype=float)))
        if not parts:
            return np.zeros(0)
        return np.concatenate(parts)

    def is_feasible(self, x, tol: float = CONSTRAINT_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.lower - tol) or np.any(x > self.upper + tol):
            return False
        g = self.constraint_values(x)
        return bool(g.size == 0 or np.max(g) <= tol)


def tighten_bounds(spec: ProblemSpec):
    """Shrink the box to the bounding box of the linearly constrained set.

    Solves the 2n LPs min/max e_i'x over {lin_a x <= lin_b, lower <= x <= upper}
    and intersects the result with the original box. Returns the box unchanged
    when no linear constraints are present.
    """
    if spec.lin_a is None:
        return spec.lower.copy(), spec.upper.copy()
    n = spec.dim
    lo = spec.lower.copy()
    up = spec.upper.copy()
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        try:
            _, vmin = solve_lp(LpProblem(e, spec.lin_a, spec.lin_b, spec.lower, spec.upper))
            _, vmax = solve_lp(
                LpProblem(e, spec.lin_a, spec.lin_b, spec.lower, spec.upper, sense="max")
            )
        except Infeasible as exc:
            raise InfeasibleConstraints("linearly constrained set is empty") from exc
        lo[i] = max(lo[i], vmin)
        up[i] = min(up[i], vmax)
    if np.any(lo > up):
        raise InfeasibleConstraints("tightened bounds crossed")
    return lo, up


@dataclass(frozen=True)
class ScalingMap:
    """Affine map between original coordinates and the scaled box [-1, 1]^n."""

    center: np.ndarray
    half_width: np.ndarray
    scaled_a: np.ndarray | None = None
    scaled_b: np.ndarray | None = None

    def to_original(self, xs):
        return np.asarray(xs, dtype=float) * self.half_width + self.center

    def to_scaled(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.half_width


def build_scaling(lower, upper, lin_a=None, lin_b=None) -> ScalingMap:
    """Build the [-1, 1] rescaling for a box, carrying linear constraints along.

    scaled_a @ xs <= scaled_b holds iff lin_a @ to_original(xs) <= lin_b.
    """
    lo = np.asarray(lower, dtype=float)
    up = np.asarray(upper, dtype=float)
    if np.any(up <= lo):
        raise DegenerateBox("upper must exceed lower componentwise")
    center = (up + lo) / 2.0
    half_width = (up - lo) / 2.0
    scaled_a = scaled_b = None
    if lin_a is not None:
        a = np.atleast_2d(np.asarray(lin_a, dtype=float))
        scaled_a = a * half_width[None, :]
        scaled_b = np.asarray(lin_b, dtype=float) - a @ center
    return ScalingMap(center, half_width, scaled_a, scaled_b)
