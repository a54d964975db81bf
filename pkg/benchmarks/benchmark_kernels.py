"""Timing comparison of the numba and pure-numpy kernel backends.

Runs each hot kernel on representative problem sizes and prints a table of
per-call times plus the speedup of the numba path. Also cross-checks that
both backends agree numerically before timing anything.

Usage: python benchmarks/benchmark_kernels.py [--repeats 20]
"""

import argparse
import time

import numpy as np

from glis import kernels


def check_agreement(rng):
    xq = rng.uniform(-1, 1, size=(40, 3))
    x = rng.uniform(-1, 1, size=(25, 3))
    f = rng.normal(size=25)
    fhat = rng.normal(size=40)
    for kind in range(6):
        a = kernels.kernel_matrix_numpy(x, kind, 1.3)
        b = kernels.kernel_matrix_numba(x, kind, 1.3)
        assert np.allclose(a, b, atol=1e-12), f"kernel_matrix kind {kind}"
        a = kernels.kernel_cross_numpy(xq, x, kind, 1.3)
        b = kernels.kernel_cross_numba(xq, x, kind, 1.3)
        assert np.allclose(a, b, atol=1e-12), f"kernel_cross kind {kind}"
    for wkind in range(2):
        a = kernels.idw_predict_batch_numpy(xq, x, f, wkind)
        b = kernels.idw_predict_batch_numba(xq, x, f, wkind)
        assert np.allclose(a, b, atol=1e-12), f"idw_predict wkind {wkind}"
        sa, za = kernels.explore_terms_batch_numpy(xq, x, f, fhat, wkind)
        sb, zb = kernels.explore_terms_batch_numba(xq, x, f, fhat, wkind)
        assert np.allclose(sa, sb, atol=1e-12) and np.allclose(za, zb, atol=1e-12)
    ma = rng.normal(size=(5, 10)) * 0.05
    mth = rng.normal(size=(30, 5))
    bth = rng.normal(size=(30, 10)) + 2.0
    a_mat = rng.normal(size=(10, 5))
    za = kernels.admm_batch_numpy(ma, mth, bth, a_mat, 1.0, 50)
    zb = kernels.admm_batch_numba(ma, mth, bth, a_mat, 1.0, 50)
    assert np.allclose(za, zb, atol=1e-10), "admm_batch"


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    check_agreement(rng)
    print("backends agree numerically; timing (best of "
          f"{args.repeats} runs, times in ms)\n")

    x = rng.uniform(-1, 1, size=(200, 5))
    xq = rng.uniform(-1, 1, size=(2000, 5))
    f = rng.normal(size=200)
    fhat = rng.normal(size=2000)
    ma = rng.normal(size=(5, 10)) * 0.05
    mth = rng.normal(size=(200, 5))
    bth = rng.normal(size=(200, 10)) + 2.0
    a_mat = rng.normal(size=(10, 5))

    cases = [
        ("kernel_matrix 200x5", lambda impl: impl(x, 0, 1.3),
         kernels.kernel_matrix_numpy, kernels.kernel_matrix_numba),
        ("kernel_cross 2000x200", lambda impl: impl(xq, x, 0, 1.3),
         kernels.kernel_cross_numpy, kernels.kernel_cross_numba),
        ("idw_predict 2000x200", lambda impl: impl(xq, x, f, 0),
         kernels.idw_predict_batch_numpy, kernels.idw_predict_batch_numba),
        ("explore_terms 2000x200", lambda impl: impl(xq, x, f, fhat, 0),
         kernels.explore_terms_batch_numpy, kernels.explore_terms_batch_numba),
        ("admm_batch 200x100it", lambda impl: impl(ma, mth, bth, a_mat, 1.0, 100),
         kernels.admm_batch_numpy, kernels.admm_batch_numba),
    ]

    print(f"{'kernel':<26} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, call, f_np, f_nb in cases:
        call(f_nb)  # warm the jit cache before timing
        t_np = best_time(lambda: call(f_np), args.repeats)
        t_nb = best_time(lambda: call(f_nb), args.repeats)
        print(f"{name:<26} {t_np * 1e3:>9.3f}ms {t_nb * 1e3:>9.3f}ms "
              f"{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
