"""Modules from the leading eigenvectors of a symmetrized Modularity Matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import TOL_EIG, TOL_ORTH, TOL_SUPPORT, eigendecompose_symmetric, sign_normalize
from .errors import SupportOverlapUnresolved, UnknownScheme
from .matrix import Module, ModularityMatrix, ModulePartition, find_blocks_combinatorial, partition_from_modules

SCHEMES = ("bipartite-adjacency", "degree-weighted")


@dataclass(frozen=True, eq=False)
class SymmetrizedMatrix:
    """Symmetric nonnegative matrix over structors then functionals."""

    values: np.ndarray
    scheme: str
    source: ModularityMatrix


def symmetrize(m: ModularityMatrix, scheme: str = "bipartite-adjacency") -> SymmetrizedMatrix:
    """Embed ``m`` as ``[[0, M^T], [M, 0]]`` over structor and functional vertices.

    ``degree-weighted`` divides each entry by ``sqrt(deg_structor * deg_functional)``.
    """
    if scheme not in SCHEMES:
        raise UnknownScheme(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    a = m.array().astype(float)
    if scheme == "degree-weighted":
        row_deg = a.sum(axis=1)
        col_deg = a.sum(axis=0)
        a = a / np.sqrt(np.outer(row_deg, col_deg))
    n_f, n_s = a.shape
    values = np.zeros((n_s + n_f, n_s + n_f))
    values[:n_s, n_s:] = a.T
    values[n_s:, :n_s] = a
    values.setflags(write=False)
    return SymmetrizedMatrix(values, scheme, m)


def leading_eigenvector(
    s: SymmetrizedMatrix, tol_eig: float = TOL_EIG, tol_orth: float = TOL_ORTH
) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and its eigenvector, oriented to have a positive sum."""
    values, vectors = eigendecompose_symmetric(s.values, tol_eig=tol_eig, tol_orth=tol_orth)
    v = vectors[:, -1]
    return float(values[-1]), (v if v.sum() >= 0 else -v)


def modules_from_leading_eigenvectors(
    s: SymmetrizedMatrix,
    tol_support: float = TOL_SUPPORT,
    tol_eig: float = TOL_EIG,
    tol_orth: float = TOL_ORTH,
) -> ModulePartition:
    """Claim vertices by eigenvector supports, largest eigenvalue first.

    A support disjoint from every claimed vertex founds a module; one
    contained in a single existing module is skipped.  Any other overlap
    raises :class:`SupportOverlapUnresolved`, carrying the combinatorial
    partition as ``fallback``.
    """
    values, vectors = eigendecompose_symmetric(s.values, tol_eig=tol_eig, tol_orth=tol_orth)
    n = values.size
    n_s = len(s.source.structors)
    owner = [-1] * n
    groups: list[list[int]] = []
    for k in range(n - 1, -1, -1):
        if len(groups) and min(owner) >= 0:
            break
        support = np.flatnonzero(np.abs(vectors[:, k]) > tol_support)
        if support.size == 0:
            continue
        owners = {owner[v] for v in support}
        if owners == {-1}:
            for v in support:
                owner[v] = len(groups)
            groups.append([int(v) for v in support])
        elif -1 in owners or len(owners) > 1:
            raise SupportOverlapUnresolved(
                f"eigenvector {k} support overlaps claimed modules {sorted(owners - {-1})} without nesting",
                fallback=find_blocks_combinatorial(s.source),
            )
    if min(owner) < 0:
        raise SupportOverlapUnresolved(
            "eigenvector supports do not cover every vertex", fallback=find_blocks_combinatorial(s.source)
        )
    modules = [
        Module(frozenset(v for v in grp if v < n_s), frozenset(v - n_s for v in grp if v >= n_s))
        for grp in groups
    ]
    return partition_from_modules(s.source, modules)


def module_leading_vectors(
    s: SymmetrizedMatrix, p: ModulePartition, tol_eig: float = TOL_EIG
) -> list[tuple[float, np.ndarray]]:
    """Per module, the top eigenpair of its own diagonal block, embedded in the full vertex space."""
    n_s = len(s.source.structors)
    out = []
    for mod in p.modules:
        idx = sorted(mod.structors) + [n_s + f for f in sorted(mod.functionals)]
        block = s.values[np.ix_(idx, idx)]
        values, vectors = eigendecompose_symmetric(block, tol_eig=tol_eig)
        full = np.zeros(s.values.shape[0])
        full[idx] = sign_normalize(vectors[:, -1])
        out.append((float(values[-1]), full))
    return out
