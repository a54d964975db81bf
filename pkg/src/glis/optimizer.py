"""Particle swarm inner solver and the surrogate-driven outer loop with an
ask/tell interface."""

from dataclasses import dataclass, field, replace

import numpy as np

from .acquisition import AcquisitionParams, acquisition_batch, sample_range
from .errors import DuplicatePoint, InvalidPhase
from .problem import ProblemSpec, ScalingMap, build_scaling, tighten_bounds
from .sampling import SampleSet, constrained_lhs, latin_hypercube
from .surrogate import IdwWeightKind, RbfKind, RbfModel, rbf_fit, rbf_update
from . import kernels
from .numerics import LpProblem, solve_lp

DUPLICATE_TOL = 1e-10

# hyperparameters from self-tuning on the 1-D test problem
DEFAULT_ALPHA = 0.8215
DEFAULT_DELTA = 2.6788
DEFAULT_EPSILON = 1.3296


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 30
    iterations: int | None = None  # None: min(200 n, 2000)
    inertia: float = 0.729
    cognitive: float = 1.494
    social: float = 1.494
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")
        if self.iterations is not None and self.iterations < 1:
            raise ValueError("iterations must be at least 1")

    def resolved_iterations(self, n: int) -> int:
        if self.iterations is not None:
            return self.iterations
        return min(200 * n, 2000)


def _pso(objective, lower, upper, config: PsoConfig, vectorized: bool):
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = len(lower)
    rng = np.random.default_rng(config.seed)
    m = config.swarm_size
    span = upper - lower
    pos = lower + rng.uniform(size=(m, n)) * span
    vel = rng.uniform(-1.0, 1.0, size=(m, n)) * span

    def evaluate(p):
        if vectorized:
            return np.asarray(objective(p), dtype=float)
        return np.array([float(objective(row)) for row in p])

    vals = evaluate(pos)
    pbest = pos.copy()
    pbest_vals = vals.copy()
    g = int(np.argmin(vals))
    gbest = pos[g].copy()
    gbest_val = float(vals[g])

    for _ in range(config.resolved_iterations(n)):
        r1 = rng.uniform(size=(m, n))
        r2 = rng.uniform(size=(m, n))
        vel = (
            config.inertia * vel
            + config.cognitive * r1 * (pbest - pos)
            + config.social * r2 * (gbest - pos)
        )
        pos = np.clip(pos + vel, lower, upper)
        vals = evaluate(pos)
        better = vals < pbest_vals
        pbest[better] = pos[better]
        pbest_vals[better] = vals[better]
        g = int(np.argmin(pbest_vals))
        if pbest_vals[g] < gbest_val:
            gbest_val = float(pbest_vals[g])
            gbest = pbest[g].copy()
    return gbest, gbest_val, pos


def pso_minimize(objective, box, config: PsoConfig, vectorized: bool = False):
    """Minimize over a box; deterministic given config.seed."""
    lower, upper = box
    x, val, _ = _pso(objective, lower, upper, config, vectorized)
    return x, val


@dataclass(frozen=True)
class GlisConfig:
    alpha: float = DEFAULT_ALPHA
    delta: float = DEFAULT_DELTA
    rbf: RbfKind | None = field(default_factory=lambda: RbfKind("inverse_quadratic", DEFAULT_EPSILON))
    idw_kind: IdwWeightKind = field(default_factory=IdwWeightKind)
    eps_svd: float = 1e-6
    eps_delta_f: float = 1e-6
    penalty_rho: float = 1000.0
    n_init: int | None = None  # None: 2 n
    n_max: int = 20
    pso: PsoConfig = field(default_factory=PsoConfig)
    seed: int = 0
    divide_hyperparams_by_n: bool = True

    def __post_init__(self):
        if self.n_init is not None and self.n_init < 1:
            raise ValueError("n_init must be at least 1")

    def effective(self, n: int):
        """Acquisition parameters and RBF kind after the optional divide-by-n
        rule for higher dimensions."""
        div = float(n) if self.divide_hyperparams_by_n else 1.0
        params = AcquisitionParams(
            alpha=self.alpha / div,
            delta=self.delta / div,
            eps_delta_f=self.eps_delta_f,
            idw_kind=self.idw_kind,
            penalty_rho=self.penalty_rho,
        )
        rbf = self.rbf
        if rbf is not None and div != 1.0:
            rbf = replace(rbf, epsilon=rbf.epsilon / div)
        return params, rbf


@dataclass(frozen=True)
class GlisState:
    spec: ProblemSpec
    config: GlisConfig
    scaling: ScalingMap
    params: AcquisitionParams
    samples: SampleSet  # scaled coordinates
    feasible: np.ndarray  # per-sample feasibility flags
    surrogate: RbfModel | None  # None: IDW surrogate
    anchor: np.ndarray | None  # strictly feasible point, original coords
    best_index: int
    phase: str  # initializing | running | finished
    eval_count: int

    @property
    def x_best(self) -> np.ndarray:
        return self.scaling.to_original(self.samples.X[self.best_index])

    @property
    def f_best(self) -> float:
        return float(self.samples.F[self.best_index])


def _best_index(f_values, feasible) -> int:
    f = np.asarray(f_values, dtype=float)
    if np.any(feasible):
        masked = np.where(feasible, f, np.inf)
        return int(np.argmin(masked))
    return int(np.argmin(f))


def _feasible_anchor(spec: ProblemSpec, lower, upper, init_points, feas_flags):
    """A strictly feasible interior point used to repair suggestions."""
    if not spec.has_constraints or spec.eval_outside_feasible:
        return None
    if spec.constraint_fn is None:
        # Chebyshev center of the linear feasible set
        n = spec.dim
        rows, rhs = [], []
        norms = np.linalg.norm(spec.lin_a, axis=1)
        for i in range(len(spec.lin_b)):
            rows.append(np.append(spec.lin_a[i], norms[i]))
            rhs.append(spec.lin_b[i])
        for i in range(n):
            e = np.zeros(n + 1)
            e[i] = 1.0
            e[n] = 1.0
            rows.append(e.copy())
            rhs.append(upper[i])
            e[i] = -1.0
            rows.append(e)
            rhs.append(-lower[i])
        cost = np.zeros(n + 1)
        cost[n] = 1.0
        x, _ = solve_lp(LpProblem(cost, np.array(rows), np.array(rhs), sense="max"))
        return x[:n]
    idx = np.nonzero(feas_flags)[0]
    if idx.size == 0:
        return None
    return init_points[idx[0]].copy()


def glis_init(spec: ProblemSpec, config: GlisConfig) -> GlisState:
    """Tighten bounds, scale, draw and evaluate the initial design, and fit
    the first surrogate."""
    n = spec.dim
    lower, upper = tighten_bounds(spec)
    scaling = build_scaling(lower, upper, spec.lin_a, spec.lin_b)
    params, rbf = config.effective(n)
    n_init = config.n_init if config.n_init is not None else 2 * n
    n_init = min(n_init, config.n_max)

    tight_spec = replace(spec, lower=lower, upper=upper)
    if spec.has_constraints and not spec.eval_outside_feasible:
        x0 = constrained_lhs(tight_spec, n_init, config.seed)
    else:
        x0 = latin_hypercube(n, n_init, (lower, upper), config.seed)

    f0 = np.array([float(spec.objective(x)) for x in x0])
    feas = np.array([tight_spec.is_feasible(x) for x in x0])
    samples = SampleSet(scaling.to_scaled(x0), f0)
    surrogate = rbf_fit(samples, rbf, config.eps_svd) if rbf is not None else None
    anchor = _feasible_anchor(tight_spec, lower, upper, x0, feas)
    phase = "finished" if n_init >= config.n_max else "running"
    return GlisState(
        spec=tight_spec,
        config=config,
        scaling=scaling,
        params=params,
        samples=samples,
        feasible=feas,
        surrogate=surrogate,
        anchor=anchor,
        best_index=_best_index(f0, feas),
        phase=phase,
        eval_count=n_init,
    )


def _penalized_batch(state: GlisState, xs: np.ndarray) -> np.ndarray:
    samples = state.samples
    vals = acquisition_batch(
        state.surrogate if state.surrogate is not None else None, samples, xs, state.params
    )
    spec = state.spec
    if not spec.has_constraints:
        return vals
    d_f = sample_range(samples.F, state.params.eps_delta_f)
    pen = np.zeros(len(xs))
    if state.scaling.scaled_a is not None:
        g = xs @ state.scaling.scaled_a.T - state.scaling.scaled_b
        pen += np.sum(np.maximum(g, 0.0) ** 2, axis=1)
    if spec.constraint_fn is not None:
        for i, xs_row in enumerate(xs):
            g = np.atleast_1d(
                np.asarray(spec.constraint_fn(state.scaling.to_original(xs_row)), dtype=float)
            )
            pen[i] += np.sum(np.maximum(g, 0.0) ** 2)
    return vals + state.params.penalty_rho * d_f * pen


def _repair_feasible(state: GlisState, x: np.ndarray) -> np.ndarray:
    """Pull an infeasible suggestion back onto the feasible set by bisecting
    toward a strictly feasible anchor."""
    spec = state.spec
    if spec.is_feasible(x, tol=0.0) or state.anchor is None:
        return x
    anchor = state.anchor
    t_lo, t_hi = 0.0, 1.0
    for _ in range(60):
        t = 0.5 * (t_lo + t_hi)
        if spec.is_feasible(anchor + t * (x - anchor), tol=0.0):
            t_lo = t
        else:
            t_hi = t
    return anchor + t_lo * (x - anchor)


def glis_suggest(state: GlisState) -> np.ndarray:
    """Next point to evaluate, in original coordinates."""
    if state.phase != "running":
        raise InvalidPhase(f"cannot suggest in phase {state.phase!r}")
    n = state.spec.dim
    pso_seed = int(
        np.random.SeedSequence([state.config.seed, state.eval_count]).generate_state(1)[0]
    )
    pso_cfg = replace(state.config.pso, seed=pso_seed)
    lower = -np.ones(n)
    upper = np.ones(n)
    xs, _, swarm = _pso(lambda p: _penalized_batch(state, p), lower, upper, pso_cfg, True)

    def min_dist(p):
        return float(np.min(np.linalg.norm(state.samples.X - p, axis=1)))

    if min_dist(xs) < DUPLICATE_TOL:
        # interpolation needs distinct points: fall back on the most
        # exploratory non-duplicate particle of the final swarm
        fhat = np.zeros(len(swarm))
        _, z = kernels.explore_terms_batch(
            swarm, state.samples.X, state.samples.F, fhat, state.params.idw_kind.code
        )
        order = np.argsort(-z)
        for i in order:
            if min_dist(swarm[i]) >= DUPLICATE_TOL:
                xs = swarm[i]
                break
        else:
            # the whole swarm collapsed onto existing samples: fall back on
            # random draws so the run can always continue
            rng = np.random.default_rng(pso_seed)
            while min_dist(xs) < DUPLICATE_TOL:
                xs = rng.uniform(-1.0, 1.0, size=n)

    x = state.scaling.to_original(xs)
    if state.spec.has_constraints and not state.spec.eval_outside_feasible:
        x = _repair_feasible(state, x)
    return x


def glis_observe(state: GlisState, x, f_value: float) -> GlisState:
    """Record an evaluated point and refit the surrogate."""
    if state.phase != "running":
        raise InvalidPhase(f"cannot observe in phase {state.phase!r}")
    x = np.asarray(x, dtype=float)
    xs = state.scaling.to_scaled(x)
    if np.min(np.linalg.norm(state.samples.X - xs, axis=1)) < DUPLICATE_TOL:
        raise DuplicatePoint("point coincides with an existing sample")
    f_value = float(f_value)
    if state.surrogate is not None:
        surrogate = rbf_update(state.surrogate, xs, f_value)
        samples = surrogate.samples
    else:
        surrogate = None
        samples = SampleSet(np.vstack([state.samples.X, xs]), np.append(state.samples.F, f_value))
    feas = np.append(state.feasible, state.spec.is_feasible(x))
    count = state.eval_count + 1
    return replace(
        state,
        samples=samples,
        feasible=feas,
        surrogate=surrogate,
        best_index=_best_index(samples.F, feas),
        phase="finished" if count >= state.config.n_max else "running",
        eval_count=count,
    )


@dataclass(frozen=True)
class GlisResult:
    x_best: np.ndarray
    f_best: float
    history: np.ndarray  # best feasible value so far, per evaluation
    state: GlisState


def _history(f_values, feasible) -> np.ndarray:
    out = np.empty(len(f_values))
    best = np.inf
    for i, (f, ok) in enumerate(zip(f_values, feasible)):
        if ok and f < best:
            best = f
        out[i] = best
    return out


def glis_run(spec: ProblemSpec, config: GlisConfig) -> GlisResult:
    """One-shot driver: initialize, then alternate suggest/observe until the
    evaluation budget is spent."""
    state = glis_init(spec, config)
    while state.phase == "running":
        x = glis_suggest(state)
        f = float(spec.objective(x))
        state = glis_observe(state, x, f)
    history = _history(state.samples.F, state.feasible)
    return GlisResult(state.x_best, state.f_best, history, state)
