"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

A rotation is applied only to a pair whose off-diagonal entry is nonzero.
Entries that start exactly zero between two disconnected vertex groups
therefore stay exactly zero, and every returned eigenvector is supported
on a single connected block of the input's sparsity pattern.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NoConvergence, NotSymmetric

TOL_EIG = 1e-9
TOL_ORTH = 1e-8
TOL_SUPPORT = 1e-6
MAX_SWEEPS = 100

# entries below this are treated as zero when choosing an eigenvector's sign
_SIGN_EPS = 1e-10


def sign_normalize(v: np.ndarray, eps: float = _SIGN_EPS) -> np.ndarray:
    """Flip ``v`` so its first entry larger than ``eps`` in magnitude is positive."""
    v = np.asarray(v, dtype=float)
    idx = np.flatnonzero(np.abs(v) > eps)
    if idx.size and v[idx[0]] < 0:
        return -v
    return v.copy()


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    app, aqq = a[p, p], a[q, q]

    col_p = a[:, p].copy()
    col_q = a[:, q]
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :]
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, p] = app - t * apq
    a[q, q] = aqq + t * apq
    a[p, q] = a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q]
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def eigendecompose_symmetric(
    matrix,
    tol_eig: float = TOL_EIG,
    tol_orth: float = TOL_ORTH,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a real symmetric matrix.

    Returns ``(values, vectors)`` with eigenvalues ascending and the
    eigenvectors as orthonormal columns.  Eigenvalues closer than
    ``tol_eig * max(1, |lambda|_max)`` count as ties and are ordered by the
    lexicographically smallest sign-normalized eigenvector.

    Raises :class:`NotSymmetric` if the input deviates from symmetry by more
    than ``tol_orth`` and :class:`NoConvergence` if ``max_sweeps`` sweeps do
    not reach the requested accuracy.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    if np.max(np.abs(a - a.T)) > tol_orth:
        raise NotSymmetric("matrix is not symmetric within tol_orth")
    original = (a + a.T) / 2.0
    a = original.copy()
    v = np.eye(n)

    scale = max(1.0, float(np.linalg.norm(a)) / math.sqrt(n))
    threshold = 1e-2 * tol_eig * scale
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= threshold:
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            row = a[p]
            for q in range(p + 1, n):
                apq = row[q]
                if apq == 0.0:
                    continue
                # negligible against both diagonal entries: drop without rotating
                if sweep > 3 and abs(apq) * 1e17 <= min(abs(a[p, p]), abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                _rotate(a, v, p, q)

    values = np.diag(a).copy()
    vectors = np.column_stack([sign_normalize(v[:, k]) for k in range(n)])

    lam_scale = max(1.0, float(np.max(np.abs(values))))
    order = list(np.argsort(values, kind="stable"))
    ordered: list[int] = []
    group = [order[0]]
    for k in order[1:]:
        if values[k] - values[group[-1]] <= tol_eig * lam_scale:
            group.append(k)
        else:
            ordered.extend(sorted(group, key=lambda j: tuple(np.round(vectors[:, j], 9))))
            group = [k]
    ordered.extend(sorted(group, key=lambda j: tuple(np.round(vectors[:, j], 9))))
    values = values[ordered]
    vectors = vectors[:, ordered]

    residual = np.max(np.abs(original - (vectors * values) @ vectors.T))
    if residual > tol_eig * lam_scale:
        raise NoConvergence(f"reconstruction residual {residual:.3g} exceeds tolerance")
    return values, vectors
