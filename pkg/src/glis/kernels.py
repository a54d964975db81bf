"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the ``GLIS_BACKEND``
environment variable ("numba" or "numpy"). The default is "numba" when
numba imports cleanly, "numpy" otherwise. Both implementations of every
kernel are kept importable (``*_numpy`` / ``*_numba``) so they can be
benchmarked and cross-checked against each other.

RBF kind codes: 0 inverse_quadratic, 1 gaussian, 2 multiquadric,
3 thin_plate_spline, 4 linear, 5 inverse_multiquadric.
IDW weight codes: 0 inverse squared distance, 1 exp(-d^2)/d^2.
"""

import math
import os

import numpy as np

# Squared-distance floor for near-duplicate query points (distance <= 1e-12).
DSQ_FLOOR = 1e-24

RBF_KIND_CODES = {
    "inverse_quadratic": 0,
    "gaussian": 1,
    "multiquadric": 2,
    "thin_plate_spline": 3,
    "linear": 4,
    "inverse_multiquadric": 5,
}

IDW_KIND_CODES = {
    "inverse_squared": 0,
    "exp_inverse_squared": 1,
}


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _phi_array(kind, eps, d):
    t = eps * d
    if kind == 0:
        return 1.0 / (1.0 + t * t)
    if kind == 1:
        return np.exp(-(t * t))
    if kind == 2:
        return np.sqrt(1.0 + t * t)
    if kind == 3:
        # limit value 0 at d = 0
        out = np.zeros_like(t)
        mask = t > 1e-300
        tm = t[mask]
        out[mask] = tm * tm * np.log(tm)
        return out
    if kind == 4:
        return t
    return 1.0 / np.sqrt(1.0 + t * t)


def _cross_sqdist(Xq, X):
    diff = Xq[:, None, :] - X[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kernel_matrix_numpy(X, kind, eps):
    d = np.sqrt(np.maximum(_cross_sqdist(X, X), 0.0))
    return _phi_array(kind, eps, d)


def kernel_cross_numpy(Xq, X, kind, eps):
    d = np.sqrt(np.maximum(_cross_sqdist(Xq, X), 0.0))
    return _phi_array(kind, eps, d)


def _weights(d2, wkind):
    d2c = np.maximum(d2, DSQ_FLOOR)
    if wkind == 0:
        return 1.0 / d2c
    return np.exp(-d2c) / d2c


def idw_predict_batch_numpy(Xq, X, F, wkind):
    d2 = _cross_sqdist(Xq, X)
    w = _weights(d2, wkind)
    sw = w.sum(axis=1)
    out = (w @ F) / sw
    # exact coincidence overrides the weighted form
    rows, cols = np.nonzero(d2 == 0.0)
    if rows.size:
        out[rows] = F[cols]
    return out


def explore_terms_batch_numpy(Xq, X, F, fhat, wkind):
    """IDW variance s and IDW distance z for a batch of query points."""
    d2 = _cross_sqdist(Xq, X)
    w = _weights(d2, wkind)
    sw = w.sum(axis=1)
    v = w / sw[:, None]
    resid2 = (F[None, :] - fhat[:, None]) ** 2
    s = np.sqrt(np.maximum((v * resid2).sum(axis=1), 0.0))
    z = (2.0 / math.pi) * np.arctan(1.0 / sw)
    rows, cols = np.nonzero(d2 == 0.0)
    if rows.size:
        z[rows] = 0.0
        s[rows] = np.abs(F[cols] - fhat[rows])
    return s, z


def admm_batch_numpy(MA, Mth, Bth, A, alpha_bar, n_iter):
    """Run the over-relaxed ADMM loop for a batch of parameter vectors.

    MA: (nz, q) precomputed solve matrix; Mth: (M, nz) per-parameter offset;
    Bth: (M, q) per-parameter right-hand sides; A: (q, nz).
    Returns the final iterates Z of shape (M, nz).
    """
    m, q = Bth.shape
    s = np.zeros((m, q))
    u = np.zeros((m, q))
    z = -Mth
    for _ in range(n_iter):
        z = (s - u) @ MA.T - Mth
        w = alpha_bar * (z @ A.T) + (1.0 - alpha_bar) * s
        s = np.minimum(w + u, Bth)
        u = u + w - s
    return z


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def _phi_scalar(kind, eps, d):
    t = eps * d
    if kind == 0:
        return 1.0 / (1.0 + t * t)
    if kind == 1:
        return math.exp(-(t * t))
    if kind == 2:
        return math.sqrt(1.0 + t * t)
    if kind == 3:
        if t <= 1e-300:
            return 0.0
        return t * t * math.log(t)
    if kind == 4:
        return t
    return 1.0 / math.sqrt(1.0 + t * t)


@njit(cache=True)
def kernel_matrix_numba(X, kind, eps):
    n_pts, dim = X.shape
    M = np.empty((n_pts, n_pts))
    for i in range(n_pts):
        M[i, i] = _phi_scalar(kind, eps, 0.0)
        for j in range(i + 1, n_pts):
            d2 = 0.0
            for k in range(dim):
                t = X[i, k] - X[j, k]
                d2 += t * t
            val = _phi_scalar(kind, eps, math.sqrt(d2))
            M[i, j] = val
            M[j, i] = val
    return M


@njit(cache=True)
def kernel_cross_numba(Xq, X, kind, eps):
    m, dim = Xq.shape
    n_pts = X.shape[0]
    K = np.empty((m, n_pts))
    for i in range(m):
        for j in range(n_pts):
            d2 = 0.0
            for k in range(dim):
                t = Xq[i, k] - X[j, k]
                d2 += t * t
            K[i, j] = _phi_scalar(kind, eps, math.sqrt(d2))
    return K


@njit(cache=True)
def idw_predict_batch_numba(Xq, X, F, wkind):
    m, dim = Xq.shape
    n_pts = X.shape[0]
    out = np.empty(m)
    for i in range(m):
        hit = -1
        sw = 0.0
        swf = 0.0
        for j in range(n_pts):
            d2 = 0.0
            for k in range(dim):
                t = Xq[i, k] - X[j, k]
                d2 += t * t
            if d2 == 0.0:
                hit = j
                break
            if d2 < DSQ_FLOOR:
                d2 = DSQ_FLOOR
            if wkind == 0:
                w = 1.0 / d2
            else:
                w = math.exp(-d2) / d2
            sw += w
            swf += w * F[j]
        if hit >= 0:
            out[i] = F[hit]
        else:
            out[i] = swf / sw
    return out


@njit(cache=True)
def explore_terms_batch_numba(Xq, X, F, fhat, wkind):
    m, dim = Xq.shape
    n_pts = X.shape[0]
    s = np.empty(m)
    z = np.empty(m)
    for i in range(m):
        hit = -1
        sw = 0.0
        sv = 0.0
        for j in range(n_pts):
            d2 = 0.0
            for k in range(dim):
                t = Xq[i, k] - X[j, k]
                d2 += t * t
            if d2 == 0.0:
                hit = j
                break
            if d2 < DSQ_FLOOR:
                d2 = DSQ_FLOOR
            if wkind == 0:
                w = 1.0 / d2
            else:
                w = math.exp(-d2) / d2
            sw += w
            r = F[j] - fhat[i]
            sv += w * r * r
        if hit >= 0:
            z[i] = 0.0
            s[i] = abs(F[hit] - fhat[i])
        else:
            z[i] = (2.0 / math.pi) * math.atan(1.0 / sw)
            val = sv / sw
            s[i] = math.sqrt(val) if val > 0.0 else 0.0
    return s, z


@njit(cache=True)
def admm_batch_numba(MA, Mth, Bth, A, alpha_bar, n_iter):
    m, q = Bth.shape
    nz = MA.shape[0]
    Z = np.zeros((m, nz))
    for j in range(m):
        s = np.zeros(q)
        u = np.zeros(q)
        z = -Mth[j].copy()
        for _ in range(n_iter):
            for a in range(nz):
                acc = -Mth[j, a]
                for b in range(q):
                    acc += MA[a, b] * (s[b] - u[b])
                z[a] = acc
            for b in range(q):
                az = 0.0
                for a in range(nz):
                    az += A[b, a] * z[a]
                w = alpha_bar * az + (1.0 - alpha_bar) * s[b]
                t = w + u[b]
                sb = t if t < Bth[j, b] else Bth[j, b]
                u[b] = u[b] + w - sb
                s[b] = sb
        Z[j] = z
    return Z


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

_requested = os.environ.get("GLIS_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ValueError(f"GLIS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
if _requested == "numba" and not NUMBA_AVAILABLE:
    raise ImportError("GLIS_BACKEND=numba requested but numba is not importable")

BACKEND = _requested or ("numba" if NUMBA_AVAILABLE else "numpy")

if BACKEND == "numba":
    kernel_matrix = kernel_matrix_numba
    kernel_cross = kernel_cross_numba
    idw_predict_batch = idw_predict_batch_numba
    explore_terms_batch = explore_terms_batch_numba
    admm_batch = admm_batch_numba
else:
    kernel_matrix = kernel_matrix_numpy
    kernel_cross = kernel_cross_numpy
    idw_predict_batch = idw_predict_batch_numpy
    explore_terms_batch = explore_terms_batch_numpy
    admm_batch = admm_batch_numpy
