"""Random matrix generators and independent oracles shared by the tests.

The oracles here deliberately avoid modulith code paths: ranks come from
sympy, components from networkx, eigenvalues from numpy.linalg.eigh and
cuts from exhaustive enumeration.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import sympy

from modulith.matrix import ModularityMatrix, build_matrix


def labelled(grid) -> ModularityMatrix:
    grid = np.asarray(grid, dtype=int)
    n_f, n_s = grid.shape
    return build_matrix([f"S{j + 1}" for j in range(n_s)], [f"F{i + 1}" for i in range(n_f)], grid.tolist())


def patch_empty_lines(grid: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Put a 1 in every all-zero row and column."""
    grid = grid.copy()
    n_f, n_s = grid.shape
    for i in range(n_f):
        if not grid[i].any():
            grid[i, rng.integers(n_s)] = 1
    for j in range(n_s):
        if not grid[:, j].any():
            grid[rng.integers(n_f), j] = 1
    return grid


def random_grid(rng: np.random.Generator, max_dim: int = 12, square: bool = False) -> np.ndarray:
    n_f = int(rng.integers(1, max_dim + 1))
    n_s = n_f if square else int(rng.integers(1, max_dim + 1))
    density = rng.uniform(0.05, 0.6)
    return patch_empty_lines((rng.random((n_f, n_s)) < density).astype(int), rng)


def random_invertible_block(rng: np.random.Generator, k: int) -> np.ndarray:
    while True:
        block = (rng.random((k, k)) < 0.5).astype(int)
        if round(abs(np.linalg.det(block))) != 0:
            return block


def block_diagonal(blocks) -> np.ndarray:
    n_f = sum(b.shape[0] for b in blocks)
    n_s = sum(b.shape[1] for b in blocks)
    out = np.zeros((n_f, n_s), dtype=int)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def random_proper_grid(rng: np.random.Generator, max_dim: int = 12) -> np.ndarray:
    """Shuffled block-diagonal matrix of invertible 0/1 blocks."""
    total = int(rng.integers(1, max_dim + 1))
    blocks = []
    left = total
    while left:
        k = int(rng.integers(1, min(left, 5) + 1))
        blocks.append(random_invertible_block(rng, k))
        left -= k
    grid = block_diagonal(blocks)
    return grid[rng.permutation(total)][:, rng.permutation(total)]


def random_connected_grid(rng: np.random.Generator, max_vertices: int = 12) -> np.ndarray:
    """Biadjacency of a random connected bipartite graph with at most ``max_vertices`` vertices."""
    n = int(rng.integers(2, max_vertices + 1))
    n_s = int(rng.integers(1, n))
    n_f = n - n_s
    grid = np.zeros((n_f, n_s), dtype=int)
    # random spanning tree: attach each new vertex to an already placed vertex of the other side
    order = [("s", j) for j in range(n_s)] + [("f", i) for i in range(n_f)]
    rng.shuffle(order)
    first_s = next(k for k, (kind, _) in enumerate(order) if kind == "s")
    first_f = next(k for k, (kind, _) in enumerate(order) if kind == "f")
    placed_s, placed_f = [order[first_s][1]], [order[first_f][1]]
    grid[order[first_f][1], order[first_s][1]] = 1
    for k, (kind, idx) in enumerate(order):
        if k in (first_s, first_f):
            continue
        if kind == "s":
            grid[placed_f[rng.integers(len(placed_f))], idx] = 1
            placed_s.append(idx)
        else:
            grid[idx, placed_s[rng.integers(len(placed_s))]] = 1
            placed_f.append(idx)
    extra = rng.random(grid.shape) < rng.uniform(0.0, 0.4)
    return grid | extra.astype(int)


def sympy_rank(grid) -> int:
    return sympy.Matrix(np.asarray(grid).tolist()).rank()


def nx_components(m: ModularityMatrix) -> set:
    """Connected components as a set of (structor set, functional set)."""
    g = nx.Graph()
    g.add_nodes_from(("s", j) for j in range(len(m.structors)))
    g.add_nodes_from(("f", i) for i in range(len(m.functionals)))
    g.add_edges_from((("f", i), ("s", j)) for i, j in m.ones())
    return {
        (frozenset(x for kind, x in comp if kind == "s"), frozenset(x for kind, x in comp if kind == "f"))
        for comp in nx.connected_components(g)
    }


def dense_laplacian(grid) -> np.ndarray:
    """L = D - A with structors first, built directly from the biadjacency grid."""
    grid = np.asarray(grid, dtype=float)
    n_f, n_s = grid.shape
    a = np.zeros((n_s + n_f, n_s + n_f))
    a[:n_s, n_s:] = grid.T
    a[n_s:, :n_s] = grid
    return np.diag(a.sum(axis=1)) - a


def enumerate_ratio_cuts(grid) -> list[tuple[float, int, frozenset]]:
    """Every nontrivial vertex bipartition as (cut/(|A||B|), cut size, side holding vertex 0).

    Vertices are numbered structors first.  Exhaustive: 2^(n-1) - 1 cuts.
    """
    grid = np.asarray(grid, dtype=int)
    n_f, n_s = grid.shape
    n = n_s + n_f
    edges = [(j, n_s + i) for i in range(n_f) for j in range(n_s) if grid[i, j]]
    out = []
    for mask in range(1, 2 ** (n - 1)):
        # vertex 0 always sits on side A; bit k-1 puts vertex k on side B
        side_b = {k for k in range(1, n) if mask >> (k - 1) & 1}
        cut = sum((u in side_b) != (w in side_b) for u, w in edges)
        size_b = len(side_b)
        out.append((cut / (size_b * (n - size_b)), cut, frozenset(set(range(n)) - side_b)))
    return out


def all_subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)
