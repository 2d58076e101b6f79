import numpy as np
import pytest

from ptising.errors import NonConvergenceError
from ptising.oracle.eigen import (
    balance,
    eigenvalues_dense,
    left_eigenvector,
    right_eigenvector,
    spectral_distance,
)


def test_diagonal():
    w = eigenvalues_dense(np.diag([3.0, -1.0, 2.0 + 1j]))
    assert np.allclose(w, [-1.0, 2.0 + 1j, 3.0])


def test_swap_matrix():
    w = eigenvalues_dense(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0], atol=1e-14)


def test_jordan_like_non_normal():
    # defective 2x2: a double eigenvalue 1 with a single eigenvector
    w = eigenvalues_dense(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert np.allclose(w, [1.0, 1.0], atol=1e-7)


def test_random_trace_and_lapack():
    rng = np.random.default_rng(16)
    m = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    w = eigenvalues_dense(m)
    assert abs(w.sum() - np.trace(m)) < 1e-11
    assert spectral_distance(w, np.linalg.eigvals(m)) < 1e-11
    assert np.all(np.diff(w.real) >= 0)


def test_badly_scaled_matrix():
    rng = np.random.default_rng(3)
    d = np.diag(10.0 ** rng.uniform(-6, 6, 12))
    m = d @ (rng.standard_normal((12, 12)) + 0j) @ np.linalg.inv(d)
    assert spectral_distance(eigenvalues_dense(m), np.linalg.eigvals(m)) < 1e-8
    b = balance(m)
    assert np.abs(b).max() < np.abs(m).max()
    assert np.trace(b) == pytest.approx(np.trace(m))


def test_report():
    rep = eigenvalues_dense(np.diag([1.0, 2.0]), report=True)
    assert np.allclose(rep.values, [1.0, 2.0])
    assert rep.residuals.shape == (2,)
    assert rep.iterations_cap >= 10


def test_non_convergence():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    with pytest.raises(NonConvergenceError) as err:
        eigenvalues_dense(m, max_iter=2)
    assert len(err.value.unconverged) > 0


def test_rejects_bad_shapes():
    with pytest.raises(ValueError):
        eigenvalues_dense(np.zeros((2, 3)))
    assert eigenvalues_dense(np.zeros((0, 0))).size == 0


def test_eigenvectors():
    rng = np.random.default_rng(2)
    m = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    lam = eigenvalues_dense(m)[3]
    r = right_eigenvector(m, lam)
    l = left_eigenvector(m, lam)
    assert np.linalg.norm(m @ r - lam * r) < 1e-10
    assert np.linalg.norm(l @ m - lam * l) < 1e-10


def test_spectral_distance():
    assert spectral_distance([1, 2j, 3], [3, 1, 2j]) == 0.0
    assert spectral_distance([1, 1, 2], [1, 2, 2]) == pytest.approx(1.0)
    assert spectral_distance([1], [1, 2]) == np.inf
