"""Command-line front end: run a registered benchmark (or a problem described
by a config file) repeatedly and write convergence CSVs.

Config files are flat key=value text using the same keys as the CLI flags
(problem, n_test, n_max, seed, alpha, delta, rbf, epsilon, eps_svd, out);
explicit flags override file values. GLIS_SEED serves as a fallback seed.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .benchmarks import BENCHMARK_NAMES, get_benchmark
from .errors import GlisError, UnknownBenchmark
from .optimizer import GlisConfig, glis_run
from .surrogate import RbfKind


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _load_config_file(path: str) -> dict:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glis", description=__doc__)
    p.add_argument("--problem", help="benchmark name or config file path")
    p.add_argument("--n-test", type=int, default=None, help="number of repeated runs")
    p.add_argument("--n-max", type=int, default=None, help="evaluation budget per run")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--rbf", default=None, help="RBF kind (e.g. inverse_quadratic)")
    p.add_argument("--epsilon", type=float, default=None, help="RBF shape parameter")
    p.add_argument("--eps-svd", type=float, default=None)
    p.add_argument("--n-init", type=int, default=None)
    p.add_argument(
        "--no-divide-by-n",
        action="store_true",
        help="do not divide alpha/delta/epsilon by the problem dimension",
    )
    p.add_argument("--out", default=".", help="output directory for CSV files")
    return p


def _resolve(args) -> dict:
    cfg = {}
    if args.problem and os.path.isfile(args.problem):
        cfg.update(_load_config_file(args.problem))
    for key in (
        "problem",
        "n_test",
        "n_max",
        "seed",
        "alpha",
        "delta",
        "rbf",
        "epsilon",
        "eps_svd",
        "n_init",
        "out",
    ):
        val = getattr(args, key, None)
        if val is not None and not (key == "problem" and os.path.isfile(str(val))):
            cfg[key] = val
        cfg.setdefault(key, None)
    if args.no_divide_by_n:
        cfg["divide_by_n"] = "false"
    if cfg.get("seed") is None and os.environ.get("GLIS_SEED"):
        cfg["seed"] = os.environ["GLIS_SEED"]
    return cfg


def run_command(cfg: dict) -> int:
    name = cfg.get("problem")
    if not name:
        print("error: no problem given (use --problem)", file=sys.stderr)
        return 1
    try:
        bench = get_benchmark(str(name))
    except UnknownBenchmark as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1

    n = bench.spec.dim
    n_test = 1 if cfg.get("n_test") is None else int(cfg["n_test"])
    if n_test < 1:
        print("error: n_test must be at least 1", file=sys.stderr)
        return 1
    n_max = 20 * n if cfg.get("n_max") is None else int(cfg["n_max"])
    if n_max < 1:
        print("error: n_max must be at least 1", file=sys.stderr)
        return 1
    seed = int(cfg.get("seed") or 0)
    divide = str(cfg.get("divide_by_n", "true")).lower() not in ("false", "0", "no")

    glis_kwargs = dict(n_max=n_max, divide_hyperparams_by_n=divide)
    if cfg.get("alpha") is not None:
        glis_kwargs["alpha"] = float(cfg["alpha"])
    if cfg.get("delta") is not None:
        glis_kwargs["delta"] = float(cfg["delta"])
    if cfg.get("rbf") is not None or cfg.get("epsilon") is not None:
        kind = str(cfg.get("rbf") or "inverse_quadratic")
        eps = float(cfg.get("epsilon") or 1.3296)
        glis_kwargs["rbf"] = RbfKind(kind, eps)
    if cfg.get("eps_svd") is not None:
        glis_kwargs["eps_svd"] = float(cfg["eps_svd"])
    if cfg.get("n_init") is not None:
        glis_kwargs["n_init"] = int(cfg["n_init"])

    out_dir = Path(str(cfg.get("out") or "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    histories = np.empty((n_test, n_max))
    run_rows = []
    for run in range(n_test):
        run_seed = int(np.random.SeedSequence([seed, run]).generate_state(1)[0])
        try:
            result = glis_run(bench.spec, GlisConfig(seed=run_seed, **glis_kwargs))
        except GlisError as exc:
            print(f"error: run {run} failed: {exc}", file=sys.stderr)
            return 1
        histories[run] = result.history
        state = result.state
        for idx in range(n_max):
            x = state.scaling.to_original(state.samples.X[idx])
            run_rows.append(
                [str(run), str(idx)]
                + [_fmt(v) for v in x]
                + [_fmt(state.samples.F[idx]), _fmt(result.history[idx])]
            )

    header = ["run", "eval_index"] + [f"x{j + 1}" for j in range(n)] + ["f", "best_so_far"]
    runs_path = out_dir / "runs.csv"
    with open(runs_path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in run_rows:
            fh.write(",".join(row) + "\n")

    summary_path = out_dir / "summary.csv"
    with open(summary_path, "w", newline="\n") as fh:
        fh.write("eval_index,mean_best,best_best,worst_best\n")
        for idx in range(n_max):
            col = histories[:, idx]
            fh.write(
                f"{idx},{_fmt(col.mean())},{_fmt(col.min())},{_fmt(col.max())}\n"
            )

    final = histories[:, -1]
    print(f"problem={bench.name} n_test={n_test} n_max={n_max} seed={seed}")
    print(f"final best-so-far: mean={final.mean():.6g} best={final.min():.6g} worst={final.max():.6g}")
    print(f"wrote {runs_path} and {summary_path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_command(_resolve(args))
    except (GlisError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
