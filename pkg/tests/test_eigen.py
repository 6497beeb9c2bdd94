from __future__ import annotations

import numpy as np
import pytest

from helpers import dense_laplacian, random_grid
from modulith.eigen import eigendecompose_symmetric, sign_normalize
from modulith.errors import NoConvergence, NotSymmetric
from modulith.fixtures import ATM_ELEMENTS


def test_two_by_two_laplacian():
    values, vectors = eigendecompose_symmetric([[1, -1], [-1, 1]])
    assert np.allclose(values, [0, 2], atol=1e-12)
    assert np.allclose(vectors[:, 0], [2**-0.5, 2**-0.5])
    assert np.allclose(vectors[:, 1], [2**-0.5, -(2**-0.5)])


def test_zero_and_empty_matrices():
    values, vectors = eigendecompose_symmetric(np.zeros((3, 3)))
    assert np.array_equal(values, np.zeros(3))
    # all eigenvalues tie, so columns come in lexicographic order
    assert np.array_equal(vectors, np.eye(3)[:, ::-1])
    values, vectors = eigendecompose_symmetric(np.zeros((0, 0)))
    assert values.size == 0


def test_atm_laplacian_has_three_zero_eigenvalues():
    values, _ = eigendecompose_symmetric(dense_laplacian(ATM_ELEMENTS))
    assert int(np.sum(np.abs(values) <= 1e-9)) == 3


def test_agrees_with_numpy_eigh():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(1, 16))
        a = rng.normal(size=(n, n))
        a = a + a.T
        values, vectors = eigendecompose_symmetric(a)
        assert np.allclose(values, np.linalg.eigvalsh(a), atol=1e-9)
        assert np.allclose(vectors.T @ vectors, np.eye(n), atol=1e-9)
        assert np.allclose(a @ vectors, vectors * values, atol=1e-8)


def test_laplacian_spectra_agree_with_eigh():
    rng = np.random.default_rng(6)
    for _ in range(40):
        lap = dense_laplacian(random_grid(rng, 12))
        values, _ = eigendecompose_symmetric(lap)
        assert np.allclose(values, np.linalg.eigvalsh(lap), atol=1e-9)


def test_eigenvectors_stay_inside_components():
    # two disconnected blocks with identical spectra: each vector lives in one block
    grid = np.zeros((4, 4), int)
    grid[:2, :2] = 1
    grid[2:, 2:] = 1
    _, vectors = eigendecompose_symmetric(dense_laplacian(grid))
    block_a = [0, 1, 4, 5]
    block_b = [2, 3, 6, 7]
    for k in range(8):
        v = vectors[:, k]
        assert np.allclose(v[block_a], 0) or np.allclose(v[block_b], 0)


def test_output_is_deterministic():
    lap = dense_laplacian(random_grid(np.random.default_rng(9), 12))
    a = eigendecompose_symmetric(lap)
    b = eigendecompose_symmetric(lap.copy())
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_rejects_asymmetric_input():
    with pytest.raises(NotSymmetric):
        eigendecompose_symmetric([[0, 1], [0, 0]])
    with pytest.raises(NotSymmetric):
        eigendecompose_symmetric([[1, 2, 3]])


def test_sweep_limit_raises():
    a = np.random.default_rng(1).normal(size=(8, 8))
    with pytest.raises(NoConvergence):
        eigendecompose_symmetric(a + a.T, max_sweeps=1)


def test_sign_normalize():
    assert np.array_equal(sign_normalize(np.array([0.0, -1.0, 2.0])), [0.0, 1.0, -2.0])
    assert np.array_equal(sign_normalize(np.array([0.0, 1.0])), [0.0, 1.0])
