"""Small dense linear-algebra kernels: truncated-SVD solve, SPD solve,
and a dense two-phase simplex LP solver.

Everything here targets tiny problems (tens of variables); robustness and
determinism take priority over speed. The simplex uses Bland's rule with
lowest-index tie-breaking so results are reproducible bit for bit.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, Infeasible, NotPositiveDefinite, Unbounded

_SYM_RTOL = 1e-10
_FEAS_TOL = 1e-9


def _check_symmetric(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > _SYM_RTOL * scale:
        raise DimensionMismatch("matrix is not symmetric")
    return m


def svd_truncated_solve(m, rhs, eps_svd):
    """Solve m @ beta = rhs, discarding singular values below eps_svd.

    Returns V1 Sigma1^-1 U1' rhs where Sigma1 keeps the singular values
    >= eps_svd; the zero vector if all of them fall below the threshold.
    """
    m = _check_symmetric(m)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (m.shape[0],):
        raise DimensionMismatch(f"rhs shape {rhs.shape} does not match matrix {m.shape}")
    if not np.all(np.isfinite(rhs)):
        raise DimensionMismatch("rhs has non-finite entries")
    if not eps_svd > 0:
        raise ValueError("eps_svd must be positive")
    u, sig, vt = np.linalg.svd(m)
    keep = sig >= eps_svd
    if not np.any(keep):
        return np.zeros(m.shape[0])
    u1 = u[:, keep]
    v1 = vt[keep].T
    return v1 @ ((u1.T @ rhs) / sig[keep])


def spd_solve(m, rhs):
    """Solve m @ X = rhs by Cholesky factorization; m must be SPD."""
    m = _check_symmetric(m)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"rhs shape {rhs.shape} does not match matrix {m.shape}")
    try:
        chol = scipy.linalg.cho_factor(m, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return scipy.linalg.cho_solve(chol, rhs)


@dataclass(frozen=True)
class LpProblem:
    """min/max cost'x  s.t.  ineq_lhs @ x <= ineq_rhs,  lower <= x <= upper.

    Bounds may contain +-inf. ineq_lhs/ineq_rhs may be None for a pure box.
    """

    cost: np.ndarray
    ineq_lhs: np.ndarray | None = None
    ineq_rhs: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    sense: str = "min"

    def __post_init__(self):
        n = len(self.cost)
        object.__setattr__(self, "cost", np.asarray(self.cost, dtype=float))
        if (self.ineq_lhs is None) != (self.ineq_rhs is None):
            raise DimensionMismatch("ineq_lhs and ineq_rhs must be given together")
        if self.ineq_lhs is not None:
            a = np.atleast_2d(np.asarray(self.ineq_lhs, dtype=float))
            b = np.asarray(self.ineq_rhs, dtype=float)
            if a.shape != (len(b), n):
                raise DimensionMismatch("inconsistent inequality dimensions")
            object.__setattr__(self, "ineq_lhs", a)
            object.__setattr__(self, "ineq_rhs", b)
        lo = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, dtype=float)
        up = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if lo.shape != (n,) or up.shape != (n,):
            raise DimensionMismatch("bound dimensions do not match cost")
        both = np.isfinite(lo) & np.isfinite(up)
        if np.any(lo[both] > up[both]):
            raise DimensionMismatch("lower bound exceeds upper bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")


def _pivot(tab, basis, row, col):
    tab[row] /= tab[row, col]
    for i in range(tab.shape[0]):
        if i != row and tab[i, col] != 0.0:
            tab[i] -= tab[i, col] * tab[row]
    basis[row] = col


def _simplex_iterate(tab, basis, n_cols, blocked=()):
    """Run simplex iterations on a tableau whose last row holds reduced costs.

    Bland's rule: entering column is the lowest index with negative reduced
    cost; leaving row breaks ratio ties by lowest basis-variable index.
    """
    blocked = set(blocked)
    for _ in range(20000):
        enter = -1
        for j in range(n_cols):
            if j not in blocked and tab[-1, j] < -_FEAS_TOL:
                enter = j
                break
        if enter < 0:
            return
        best_ratio = np.inf
        leave = -1
        for i in range(tab.shape[0] - 1):
            a = tab[i, enter]
            if a > _FEAS_TOL:
                ratio = tab[i, -1] / a
                if ratio < best_ratio - 1e-12 or (
                    ratio < best_ratio + 1e-12 and (leave < 0 or basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            raise Unbounded("LP is unbounded")
        _pivot(tab, basis, leave, enter)
    raise RuntimeError("simplex failed to terminate")


def _solve_standard_form(a, b, c):
    """min c'y s.t. a y = b, y >= 0 via two-phase tableau simplex."""
    m, n = a.shape
    a = a.copy()
    b = b.copy()
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    # phase 1: artificials on every row
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    basis = list(range(n, n + m))
    tab[-1, :n] = -a.sum(axis=0)
    tab[-1, -1] = -b.sum()
    _simplex_iterate(tab, basis, n + m)
    if tab[-1, -1] < -1e-7:
        raise Infeasible("LP constraints are infeasible")

    # drive remaining artificials out of the basis (degenerate rows)
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(tab[i, j]) > _FEAS_TOL:
                    _pivot(tab, basis, i, j)
                    break

    keep_rows = [i for i in range(m) if basis[i] < n]
    tab2 = np.zeros((len(keep_rows) + 1, n + 1))
    for r, i in enumerate(keep_rows):
        tab2[r, :n] = tab[i, :n]
        tab2[r, -1] = tab[i, -1]
    basis2 = [basis[i] for i in keep_rows]

    # phase 2: price out the real objective for the current basis
    tab2[-1, :n] = c
    for r, var in enumerate(basis2):
        if tab2[-1, var] != 0.0:
            tab2[-1] -= tab2[-1, var] * tab2[r]
    _simplex_iterate(tab2, basis2, n)

    y = np.zeros(n)
    for r, var in enumerate(basis2):
        y[var] = tab2[r, -1]
    return y


def solve_lp(p: LpProblem):
    """Solve a dense LP; returns (optimizer, objective value).

    Raises Infeasible or Unbounded. The feasible set must be bounded in the
    optimization direction (each variable needs a finite bound or the
    constraints must bound the set).
    """
    n = len(p.cost)
    c_orig = p.cost if p.sense == "min" else -p.cost

    # substitute shifted nonnegative variables; free variables are split:
    # each column contributes off + sign * y to its original variable
    cols = []  # (original index, sign, offset)
    extra_rows = []  # (column index, rhs) upper-bound rows y_k <= rhs
    for j in range(n):
        lo, up = p.lower[j], p.upper[j]
        if np.isfinite(lo):
            cols.append((j, 1.0, lo))
            if np.isfinite(up):
                extra_rows.append((len(cols) - 1, up - lo))
        elif np.isfinite(up):
            cols.append((j, -1.0, up))
        else:
            cols.append((j, 1.0, 0.0))
            cols.append((j, -1.0, 0.0))
    ncols = len(cols)

    rows_a = np.zeros((0, n)) if p.ineq_lhs is None else p.ineq_lhs
    rows_b = np.zeros(0) if p.ineq_rhs is None else p.ineq_rhs
    m_ineq = len(rows_b)
    m_total = m_ineq + len(extra_rows)
    a_std = np.zeros((m_total, ncols + m_total))
    b_std = np.zeros(m_total)
    c_std = np.zeros(ncols + m_total)

    for k, (j, sign, off) in enumerate(cols):
        c_std[k] = sign * c_orig[j]
        a_std[:m_ineq, k] = sign * rows_a[:, j]
    b_std[:m_ineq] = rows_b - sum(
        rows_a[:, j] * off for (j, _sign, off) in cols if off != 0.0
    )
    for r, (k, ub) in enumerate(extra_rows):
        a_std[m_ineq + r, k] = 1.0
        b_std[m_ineq + r] = ub
    for i in range(m_total):
        a_std[i, ncols + i] = 1.0  # slack

    y = _solve_standard_form(a_std, b_std, c_std)

    x = np.zeros(n)
    for k, (j, sign, off) in enumerate(cols):
        x[j] += off + sign * y[k]
    value = float(p.cost @ x)
    return x, value
