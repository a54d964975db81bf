"""Latin hypercube sampling, the oversample-and-filter constrained variant,
and the exploration-driven feasible initializer."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import Infeasible, LowFeasibleVolume, NotFullDimensional
from .numerics import LpProblem, solve_lp
from .problem import ProblemSpec

MAX_OVERSAMPLE_ROUNDS = 10
MAX_OVERSAMPLE_POINTS = 200_000


@dataclass(frozen=True)
class SampleSet:
    """Evaluated points X (N x n) with their objective values F (N)."""

    X: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        x = np.atleast_2d(np.asarray(self.X, dtype=float))
        f = np.asarray(self.F, dtype=float)
        if x.shape[0] != f.shape[0]:
            raise ValueError("X and F disagree on the number of samples")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "F", f)

    def __len__(self) -> int:
        return self.X.shape[0]


def _lhs(rng: np.random.Generator, n: int, n_samples: int, lower, upper) -> np.ndarray:
    """One Latin hypercube design: per coordinate, one point per equal bin.

    Uses the numpy PCG64 generator seeded by the caller; identical seeds give
    identical designs bit for bit.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    pts = np.empty((n_samples, n))
    for j in range(n):
        perm = rng.permutation(n_samples)
        jitter = rng.uniform(size=n_samples)
        unit = (perm + jitter) / n_samples
        pts[:, j] = lower[j] + unit * (upper[j] - lower[j])
    return pts


def latin_hypercube(n: int, n_samples: int, box, seed: int) -> np.ndarray:
    if n_samples < 1:
        raise ValueError("need at least one sample")
    lower, upper = box
    return _lhs(np.random.default_rng(seed), n, n_samples, lower, upper)


def chebyshev_radius(spec: ProblemSpec) -> float:
    """Radius of the largest ball inscribed in {lin_a x <= lin_b} cap box.

    Positive iff the set is full-dimensional; raises Infeasible when the set
    is empty. Constraints must be linear (or absent).
    """
    if spec.constraint_fn is not None:
        raise ValueError("chebyshev_radius requires linear constraints only")
    n = spec.dim
    rows = []
    rhs = []
    if spec.lin_a is not None:
        norms = np.linalg.norm(spec.lin_a, axis=1)
        for i in range(len(spec.lin_b)):
            rows.append(np.append(spec.lin_a[i], norms[i]))
            rhs.append(spec.lin_b[i])
    for i in range(n):
        e = np.zeros(n + 1)
        e[i] = 1.0
        e[n] = 1.0
        rows.append(e.copy())
        rhs.append(spec.upper[i])
        e[i] = -1.0
        rows.append(e)
        rhs.append(-spec.lower[i])
    cost = np.zeros(n + 1)
    cost[n] = 1.0
    lp = LpProblem(cost, np.array(rows), np.array(rhs), sense="max")
    _, r = solve_lp(lp)
    if r < 0:
        raise Infeasible("constrained set is empty")
    return r


def constrained_lhs(spec: ProblemSpec, n_init: int, seed: int) -> np.ndarray:
    """Latin hypercube points filtered to the feasible set.

    Oversamples geometrically until n_init feasible points survive, keeping
    the first n_init in generation order; gives up after
    MAX_OVERSAMPLE_ROUNDS rounds.
    """
    if spec.lin_a is not None and spec.constraint_fn is None:
        if chebyshev_radius(spec) <= 0:
            raise NotFullDimensional("feasible set is not full-dimensional")
    rng = np.random.default_rng(seed)
    n = spec.dim
    n_draw = n_init
    for _ in range(MAX_OVERSAMPLE_ROUNDS):
        pts = _lhs(rng, n, n_draw, spec.lower, spec.upper)
        feas = [p for p in pts if spec.is_feasible(p)]
        if len(feas) >= n_init:
            return np.array(feas[:n_init])
        n_k = len(feas)
        if n_k > 0:
            n_draw = math.ceil(min(20.0, 1.1 * n_init / n_k) * n_draw)
        else:
            n_draw = 20 * n_draw
        n_draw = min(n_draw, MAX_OVERSAMPLE_POINTS)
    raise LowFeasibleVolume(
        f"could not collect {n_init} feasible points in {MAX_OVERSAMPLE_ROUNDS} rounds"
    )


def idw_feasible_init(spec: ProblemSpec, x1, n_init: int, seed: int = 0) -> np.ndarray:
    """Grow a feasible initial design from x1 by repeatedly maximizing the
    exploration distance term over the feasible set."""
    from .acquisition import idw_distance
    from .optimizer import PsoConfig, pso_minimize
    from .surrogate import IdwWeightKind

    x1 = np.asarray(x1, dtype=float)
    if not spec.is_feasible(x1):
        raise Infeasible("x1 must be feasible")
    pts = [x1]
    kind = IdwWeightKind("inverse_squared")
    rng = np.random.default_rng(seed)
    for _ in range(n_init - 1):
        samples = SampleSet(np.array(pts), np.zeros(len(pts)))

        def neg_z(x, samples=samples):
            pen = 0.0
            g = spec.constraint_values(x)
            if g.size:
                pen = 1000.0 * float(np.sum(np.maximum(g, 0.0) ** 2))
            return -idw_distance(samples, x, kind) + pen

        cfg = PsoConfig(seed=int(rng.integers(2**31)))
        x_new, _ = pso_minimize(neg_z, (spec.lower, spec.upper), cfg)
        pts.append(x_new)
    return np.array(pts)
