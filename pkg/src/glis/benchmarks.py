"""Benchmark problems and case studies: the standard global-optimization
test set, the 1-D test function, the self-tuning meta-objective, and ADMM
hyperparameter tuning for a parametric QP."""

from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np

from . import kernels
from .errors import EnumerationBoundExceeded, Infeasible, UnknownBenchmark
from .numerics import spd_solve
from .optimizer import GlisConfig, glis_run
from .problem import ProblemSpec
from .surrogate import RbfKind


def f_1d(x: float) -> float:
    """Scalar multimodal test function; global minimum ~0.2795 near x ~ -0.96."""
    x = float(x)
    return (1.0 + x * math.sin(2.0 * x) * math.cos(3.0 * x) / (1.0 + x * x)) ** 2 + x * x / 12.0 + x / 10.0


def _ackley(x):
    x = np.asarray(x, dtype=float)
    d = len(x)
    return (
        -20.0 * math.exp(-0.02 * math.sqrt(np.sum(x * x) / d))
        - math.exp(np.sum(np.cos(2.0 * math.pi * x)) / d)
        + 20.0
        + math.e
    )


def _adjiman(x):
    return math.cos(x[0]) * math.sin(x[1]) - x[0] / (x[1] ** 2 + 1.0)


def _branin(x):
    a, b, c = 1.0, 5.1 / (4.0 * math.pi**2), 5.0 / math.pi
    return (
        a * (x[1] - b * x[0] ** 2 + c * x[0] - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * math.pi)) * math.cos(x[0])
        + 10.0
    )


def _camelsixhumps(x):
    x1, x2 = float(x[0]), float(x[1])
    return (4.0 - 2.1 * x1**2 + x1**4 / 3.0) * x1**2 + x1 * x2 + (-4.0 + 4.0 * x2**2) * x2**2


_HARTMAN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMAN3_P = 1e-4 * np.array(
    [[3689.0, 1170.0, 2673.0], [4699.0, 4387.0, 7470.0], [1091.0, 8732.0, 5547.0], [381.5, 5743.0, 8828.0]]
)
_HARTMAN6_A = np.array(
    [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
)
_HARTMAN6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)
_HARTMAN_C = np.array([1.0, 1.2, 3.0, 3.2])


def _hartman(x, a, p):
    x = np.asarray(x, dtype=float)
    inner = np.sum(a * (x[None, :] - p) ** 2, axis=1)
    return float(-np.sum(_HARTMAN_C * np.exp(-inner)))


def _himmelblau(x):
    return (x[0] ** 2 + x[1] - 11.0) ** 2 + (x[0] + x[1] ** 2 - 7.0) ** 2


def _rosenbrock(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def _stepfunction2(x):
    x = np.asarray(x, dtype=float)
    return float(np.sum(np.floor(x + 0.5) ** 2))


def _styblinski_tang(x):
    x = np.asarray(x, dtype=float)
    return float(0.5 * np.sum(x**4 - 16.0 * x**2 + 5.0 * x))


# Linear rows and disk of the constrained camelsixhumps variant
CAMEL_CONSTR_A = np.array(
    [
        [1.6295, 1.0],
        [-1.0, 4.4553],
        [-4.3023, -1.0],
        [-5.6905, -12.1374],
        [17.6198, 1.0],
    ]
)
CAMEL_CONSTR_B = np.array([3.0786, 2.7417, -1.4909, 1.0, 32.5198])


def _camel_disk(x):
    return np.array([x[0] ** 2 + (x[1] + 0.1) ** 2 - 0.5])


@dataclass(frozen=True)
class BenchmarkProblem:
    name: str
    spec: ProblemSpec
    known_optimum_value: float | None = None
    optimum_provenance: str | None = None
    known_optimizers: tuple = ()


# Registered optima were recomputed with a dense PSO sweep plus a bounded
# local polish (see tests/test_benchmarks.py for the spot checks), not copied
# from any published table.
_TABLE = {
    "ackley": dict(
        fn=_ackley,
        lower=[-5.0, -5.0],
        upper=[5.0, 5.0],
        optimum=0.0,
        optimizers=((0.0, 0.0),),
        provenance="derived:analytic-stationary-point",
    ),
    "adjiman": dict(
        fn=_adjiman,
        lower=[-1.0, -1.0],
        upper=[2.0, 1.0],
        optimum=-2.021806783359787,
        optimizers=((2.0, 0.10578346944880798),),
        provenance="derived:pso+polish",
    ),
    "branin": dict(
        fn=_branin,
        lower=[-5.0, 0.0],
        upper=[10.0, 15.0],
        optimum=0.39788735772973816,
        optimizers=(
            (math.pi, 2.275),
            (-math.pi, 12.275),
            (9.42477796076938, 2.475),
        ),
        provenance="derived:pso+polish",
    ),
    "camelsixhumps": dict(
        fn=_camelsixhumps,
        lower=[-5.0, -5.0],
        upper=[5.0, 5.0],
        optimum=-1.0316284534898774,
        optimizers=(
            (-0.08984201402829575, 0.7126564025798486),
            (0.08984201368293157, -0.7126564032705769),
        ),
        provenance="derived:pso+polish",
    ),
    "hartman3": dict(
        fn=lambda x: _hartman(x, _HARTMAN3_A, _HARTMAN3_P),
        lower=[0.0, 0.0, 0.0],
        upper=[1.0, 1.0, 1.0],
        optimum=-3.862782147820752,
        optimizers=((0.11461435123655081, 0.5556488443695904, 0.8525469484196442),),
        provenance="derived:pso+polish",
    ),
    "hartman6": dict(
        fn=lambda x: _hartman(x, _HARTMAN6_A, _HARTMAN6_P),
        lower=[0.0] * 6,
        upper=[1.0] * 6,
        optimum=-3.3223680114155134,
        optimizers=(
            (
                0.201689514819215,
                0.15001068951769186,
                0.4768739776722388,
                0.27533242748705467,
                0.3116516139813329,
                0.657300533527185,
            ),
        ),
        provenance="derived:pso+polish",
    ),
    "himmelblau": dict(
        fn=_himmelblau,
        lower=[-6.0, -6.0],
        upper=[6.0, 6.0],
        optimum=0.0,
        optimizers=(
            (3.0, 2.0),
            (-2.805118086952745, 3.131312518250573),
            (-3.779310253377747, -3.283185991286170),
            (3.584428340330492, -1.848126526964404),
        ),
        provenance="derived:pso+polish",
    ),
    "rosenbrock8": dict(
        fn=_rosenbrock,
        lower=[-30.0] * 8,
        upper=[30.0] * 8,
        optimum=0.0,
        optimizers=((1.0,) * 8,),
        provenance="derived:analytic-stationary-point",
    ),
    "stepfunction2": dict(
        fn=_stepfunction2,
        lower=[-100.0] * 4,
        upper=[100.0] * 4,
        optimum=0.0,
        optimizers=((0.0,) * 4,),
        provenance="derived:grid",
    ),
    "styblinski-tang5": dict(
        fn=_styblinski_tang,
        lower=[-5.0] * 5,
        upper=[5.0] * 5,
        optimum=-195.83082851885706,
        optimizers=((-2.9035340185960217,) * 5,),
        provenance="derived:pso+polish",
    ),
}

BENCHMARK_NAMES = tuple(_TABLE) + ("camelsixhumps-constrained", "f1d", "admm-qp")

# grid argmin over [-3, 3] at 1e-5 resolution, then locally polished
F1D_OPTIMIZER = -0.9597685731779618
F1D_OPTIMUM = 0.2795044960582652


def get_benchmark(name: str) -> BenchmarkProblem:
    if name in _TABLE:
        row = _TABLE[name]
        spec = ProblemSpec(
            lower=np.array(row["lower"]),
            upper=np.array(row["upper"]),
            objective=row["fn"],
        )
        return BenchmarkProblem(
            name,
            spec,
            known_optimum_value=row["optimum"],
            optimum_provenance=row["provenance"],
            known_optimizers=row["optimizers"],
        )
    if name == "camelsixhumps-constrained":
        spec = ProblemSpec(
            lower=np.array([-2.0, -1.0]),
            upper=np.array([2.0, 1.0]),
            objective=_camelsixhumps,
            lin_a=CAMEL_CONSTR_A,
            lin_b=CAMEL_CONSTR_B,
            constraint_fn=_camel_disk,
            eval_outside_feasible=False,
        )
        return BenchmarkProblem(name, spec)
    if name == "f1d":
        spec = ProblemSpec(
            lower=np.array([-3.0]),
            upper=np.array([3.0]),
            objective=lambda x: f_1d(x[0]),
        )
        return BenchmarkProblem(
            name,
            spec,
            known_optimum_value=F1D_OPTIMUM,
            optimum_provenance="derived:grid+polish",
            known_optimizers=((F1D_OPTIMIZER,),),
        )
    if name == "admm-qp":
        return admm_benchmark()
    raise UnknownBenchmark(f"unknown benchmark {name!r}; known: {', '.join(BENCHMARK_NAMES)}")


def self_tuning_objective(hyper, n_t: int = 20, n_max: int = 20, seed: int = 0) -> float:
    """Meta-objective scoring a hyperparameter triple (alpha, delta, epsilon)
    by how fast repeated runs on the 1-D problem converge; later stagnation is
    weighted more heavily."""
    alpha, delta, eps = (float(v) for v in hyper)
    if n_max % 2 != 0:
        raise ValueError("n_max must be even")
    spec = get_benchmark("f1d").spec
    half = n_max // 2
    total = 0.0
    for i in range(n_t):
        run_seed = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        cfg = GlisConfig(
            alpha=alpha,
            delta=delta,
            rbf=RbfKind("inverse_quadratic", eps),
            n_init=8,
            n_max=n_max,
            seed=run_seed,
            divide_hyperparams_by_n=False,
        )
        fv = glis_run(spec, cfg).state.samples.F
        for h in range(half + 1):
            total += (h + 1) * float(np.min(fv[: half + h]))
    return total


# ---------------------------------------------------------------------------
# ADMM-for-QP case study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QpProblem:
    """min_z 0.5 z'Qz + (c + F theta)'z  s.t.  A z <= b + S theta."""

    Q: np.ndarray
    c: np.ndarray
    F: np.ndarray
    A: np.ndarray
    b: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class AdmmConfig:
    rho_bar: float
    alpha_bar: float
    iterations: int = 100

    def __post_init__(self):
        if not self.rho_bar > 0:
            raise ValueError("rho_bar must be positive")
        if self.iterations < 1:
            raise ValueError("need at least one ADMM iteration")


QP_INSTANCE = QpProblem(
    Q=np.array(
        [
            [6.6067, -1.6361, 2.8198, 0.3776, 3.1448],
            [-1.6361, 0.9943, -0.9998, -0.4786, -0.5198],
            [2.8198, -0.9998, 4.0749, 0.2183, 0.2714],
            [0.3776, -0.4786, 0.2183, 0.7310, 0.1689],
            [3.1448, -0.5198, 0.2714, 0.1689, 2.1716],
        ]
    ),
    c=np.array([-11.4795, 1.0487, 7.2225, 25.8549, -6.6689]),
    F=np.array(
        [
            [1.8733, 8.4038, -6.0033],
            [-0.8249, -8.8803, 4.8997],
            [-19.3302, 1.0009, 7.3936],
            [-4.3897, -5.4453, 17.1189],
            [-17.9468, 3.0352, -1.9412],
        ]
    ),
    A=np.array(
        [
            [-0.8637, -1.0891, -0.6156, 1.4193, -1.0],
            [0.0774, 0.0326, 0.7481, 0.2916, -1.0],
            [-1.2141, 0.5525, -0.1924, 0.1978, -1.0],
            [-1.1135, 1.1006, 0.8886, 1.5877, -1.0],
            [-0.0068, 1.5442, -0.7648, -0.8045, -1.0],
            [1.5326, 0.0859, -1.4023, 0.6966, -1.0],
            [-0.7697, -1.4916, -1.4224, 0.8351, -1.0],
            [0.3714, -0.7423, 0.4882, -0.2437, -1.0],
            [-0.2256, -1.0616, -0.1774, 0.2157, -1.0],
            [1.1174, 2.3505, -0.1961, -1.1658, -1.0],
        ]
    ),
    b=np.array([0.0838, 0.2290, 0.9133, 0.1524, 0.8258, 0.5383, 0.9961, 0.0782, 0.4427, 0.1067]),
    S=np.array(
        [
            [2.9080, -0.3538, 0.0229],
            [0.8252, -0.8236, -0.2620],
            [1.3790, -1.5771, -1.7502],
            [-1.0582, 0.5080, -0.2857],
            [-0.4686, 0.2820, -0.8314],
            [-0.2725, 0.0335, -0.9792],
            [1.0984, -1.3337, -1.1564],
            [-0.2779, 1.1275, -0.5336],
            [0.7015, 0.3502, -2.0026],
            [-2.0518, -0.2991, 0.9642],
        ]
    ),
)


def _admm_precompute(qp: QpProblem, rho_bar: float):
    h = qp.Q / rho_bar + qp.A.T @ qp.A
    ma = spd_solve(h, qp.A.T)
    return h, ma


def admm_qp_solve(qp: QpProblem, theta, cfg: AdmmConfig):
    """Run the fixed-iteration over-relaxed ADMM loop; returns (z, objective)."""
    theta = np.asarray(theta, dtype=float)
    h, ma = _admm_precompute(qp, cfg.rho_bar)
    lin = qp.c + qp.F @ theta
    # the linear term enters the z-update scaled by 1/rho, matching the
    # stationarity condition of the augmented Lagrangian
    m_theta = spd_solve(h, lin) / cfg.rho_bar
    b_theta = qp.b + qp.S @ theta
    z = kernels.admm_batch(ma, m_theta[None, :], b_theta[None, :], qp.A, cfg.alpha_bar, cfg.iterations)[0]
    obj = 0.5 * float(z @ qp.Q @ z) + float(lin @ z)
    return z, obj


def qp_reference_solve(qp: QpProblem, theta):
    """Exact strictly-convex QP solution by active-set enumeration.

    Tries working sets in order of increasing size and accepts the first one
    whose KKT point is primal feasible with nonnegative multipliers.
    """
    n = qp.Q.shape[0]
    q = qp.A.shape[0]
    if n > 12 or q > 16:
        raise EnumerationBoundExceeded("problem too large for active-set enumeration")
    theta = np.asarray(theta, dtype=float)
    lin = qp.c + qp.F @ theta
    b_theta = qp.b + qp.S @ theta
    for size in range(min(n, q) + 1):
        for w in combinations(range(q), size):
            w = list(w)
            k = len(w)
            kkt = np.zeros((n + k, n + k))
            kkt[:n, :n] = qp.Q
            if k:
                kkt[:n, n:] = qp.A[w].T
                kkt[n:, :n] = qp.A[w]
            rhs = np.concatenate([-lin, b_theta[w]])
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                continue
            z, lam = sol[:n], sol[n:]
            if np.any(lam < -1e-9):
                continue
            if np.any(qp.A @ z > b_theta + 1e-9):
                continue
            obj = 0.5 * float(z @ qp.Q @ z) + float(lin @ z)
            return z, obj
    raise Infeasible("no KKT point found; QP may be infeasible")


def sample_thetas(m: int, seed: int = 0) -> np.ndarray:
    """Uniform parameter samples on [-1, 1]^3; fixed seed for reproducibility."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(m, 3))


_BRACKET_FLOOR = 1e-300


def admm_performance(x, qp: QpProblem, thetas, beta_bar: float = 1.0, n_iter: int = 100, reference=None):
    """Quality score (lower is better) for ADMM hyperparameters x = (rho, alpha):
    log of mean relative suboptimality plus weighted relative constraint
    violation over the parameter samples."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    rho_bar, alpha_bar = float(x[0]), float(x[1])
    h, ma = _admm_precompute(qp, rho_bar)
    lin = qp.c[None, :] + thetas @ qp.F.T  # (m, n)
    m_theta = spd_solve(h, lin.T).T / rho_bar
    b_theta = qp.b[None, :] + thetas @ qp.S.T  # (m, q)
    z = kernels.admm_batch(ma, m_theta, b_theta, qp.A, alpha_bar, n_iter)
    obj = 0.5 * np.einsum("ij,jk,ik->i", z, qp.Q, z) + np.einsum("ij,ij->i", lin, z)

    if reference is None:
        reference = [qp_reference_solve(qp, th) for th in thetas]
    ref_obj = np.array([r[1] for r in reference])

    rel_opt = np.maximum((obj - ref_obj) / (1.0 + np.abs(ref_obj)), 0.0)
    viol = (z @ qp.A.T - b_theta) / (1.0 + np.abs(b_theta))
    rel_viol = np.maximum(viol.max(axis=1), 0.0)
    bracket = float(np.mean(rel_opt + beta_bar * rel_viol))
    return math.log(max(bracket, _BRACKET_FLOOR))


def admm_benchmark(m_thetas: int = 200, seed: int = 0, n_iter: int = 100) -> BenchmarkProblem:
    """The ADMM tuning study packaged as a benchmark problem over (rho, alpha)."""
    qp = QP_INSTANCE
    thetas = sample_thetas(m_thetas, seed)
    reference = [qp_reference_solve(qp, th) for th in thetas]

    def objective(x):
        return admm_performance(x, qp, thetas, n_iter=n_iter, reference=reference)

    spec = ProblemSpec(
        lower=np.array([0.01, 0.01]),
        upper=np.array([3.0, 3.0]),
        objective=objective,
    )
    return BenchmarkProblem("admm-qp", spec)
