"""Cross-checks between the numba and pure-numpy kernel implementations."""

import numpy as np
import pytest

from glis import kernels


def rng_data(seed=0, m=25, n_pts=15, dim=3):
    rng = np.random.default_rng(seed)
    xq = rng.uniform(-2, 2, size=(m, dim))
    x = rng.uniform(-2, 2, size=(n_pts, dim))
    f = rng.normal(size=n_pts)
    return xq, x, f


@pytest.mark.parametrize("kind", sorted(kernels.RBF_KIND_CODES.values()))
def test_kernel_matrix_backends_agree(kind):
    _, x, _ = rng_data(kind)
    a = kernels.kernel_matrix_numpy(x, kind, 1.3)
    b = kernels.kernel_matrix_numba(x, kind, 1.3)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("kind", sorted(kernels.RBF_KIND_CODES.values()))
def test_kernel_cross_backends_agree(kind):
    xq, x, _ = rng_data(kind + 10)
    a = kernels.kernel_cross_numpy(xq, x, kind, 0.6)
    b = kernels.kernel_cross_numba(xq, x, kind, 0.6)
    np.testing.assert_allclose(a, b, atol=1e-13)


@pytest.mark.parametrize("wkind", [0, 1])
def test_idw_predict_backends_agree(wkind):
    xq, x, f = rng_data(20 + wkind)
    # include exact sample hits in the queries
    xq = np.vstack([xq, x[:3]])
    a = kernels.idw_predict_batch_numpy(xq, x, f, wkind)
    b = kernels.idw_predict_batch_numba(xq, x, f, wkind)
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("wkind", [0, 1])
def test_explore_terms_backends_agree(wkind):
    xq, x, f = rng_data(30 + wkind)
    xq = np.vstack([xq, x[:3]])
    fhat = np.random.default_rng(40 + wkind).normal(size=len(xq))
    s_np, z_np = kernels.explore_terms_batch_numpy(xq, x, f, fhat, wkind)
    s_nb, z_nb = kernels.explore_terms_batch_numba(xq, x, f, fhat, wkind)
    np.testing.assert_allclose(s_np, s_nb, atol=1e-12)
    np.testing.assert_allclose(z_np, z_nb, atol=1e-12)
    # exact hits have z = 0
    assert np.all(z_np[-3:] == 0.0)


def test_admm_batch_backends_agree():
    rng = np.random.default_rng(50)
    nz, q, m = 4, 6, 7
    a = rng.normal(size=(q, nz))
    ma = rng.normal(size=(nz, q)) * 0.2
    mth = rng.normal(size=(m, nz))
    bth = rng.normal(size=(m, q)) + 1.0
    for n_iter in (0, 1, 37):
        z_np = kernels.admm_batch_numpy(ma, mth, bth, a, 1.4, n_iter)
        z_nb = kernels.admm_batch_numba(ma, mth, bth, a, 1.4, n_iter)
        np.testing.assert_allclose(z_np, z_nb, atol=1e-11)


def test_thin_plate_spline_limit_at_zero():
    x = np.zeros((2, 1))
    x[1, 0] = 1.0
    m = kernels.kernel_matrix_numpy(x, kernels.RBF_KIND_CODES["thin_plate_spline"], 1.0)
    assert m[0, 0] == 0.0 and m[1, 1] == 0.0


def test_near_duplicate_queries_stay_finite():
    x = np.array([[0.0, 0.0], [1.0, 1.0]])
    f = np.array([1.0, 2.0])
    xq = np.array([[1e-14, 0.0]])  # closer than the distance floor
    for fn in (kernels.idw_predict_batch_numpy, kernels.idw_predict_batch_numba):
        v = fn(xq, x, f, 0)
        assert np.all(np.isfinite(v))


def test_backend_selection_exports():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.kernel_matrix in (
        kernels.kernel_matrix_numba,
        kernels.kernel_matrix_numpy,
    )
