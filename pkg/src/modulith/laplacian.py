"""Bipartite graph, Laplacian L = D - A, zero-eigenvalue modules and Fiedler splits.

Vertex order is all structors first, then all functionals: structor ``j``
is vertex ``j`` and functional ``i`` is vertex ``s + i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .eigen import TOL_EIG, TOL_ORTH, TOL_SUPPORT, eigendecompose_symmetric, sign_normalize
from .errors import DegenerateNullSpace, DegenerateSplit, NotConnected
from .matrix import Module, ModularityMatrix, ModulePartition, build_matrix, partition_from_modules


@dataclass(frozen=True)
class BipartiteGraph:
    """Structor-functional graph, one edge per 1-element.

    ``edges`` holds ``(structor vertex, functional vertex)`` pairs with the
    functional vertex in ``[s, s + f)``.  ``structor_ids`` and
    ``functional_ids`` map local positions back to indices of the source
    matrix, so subgraphs can report results in source coordinates.
    """

    structor_labels: tuple[str, ...]
    functional_labels: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    structor_ids: tuple[int, ...]
    functional_ids: tuple[int, ...]

    @property
    def n_structors(self) -> int:
        return len(self.structor_labels)

    @property
    def n_vertices(self) -> int:
        return len(self.structor_labels) + len(self.functional_labels)

    def is_structor(self, vertex: int) -> bool:
        return vertex < self.n_structors

    def label(self, vertex: int) -> str:
        s = self.n_structors
        return self.structor_labels[vertex] if vertex < s else self.functional_labels[vertex - s]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_matrix(self) -> ModularityMatrix:
        s = self.n_structors
        grid = [[0] * s for _ in self.functional_labels]
        for u, w in self.edges:
            grid[w - s][u] = 1
        return build_matrix(self.structor_labels, self.functional_labels, grid)

    def components(self) -> list[list[int]]:
        """Connected vertex sets by BFS, each sorted, ordered by smallest vertex."""
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        seen = [False] * self.n_vertices
        comps = []
        for start in range(self.n_vertices):
            if seen[start]:
                continue
            seen[start] = True
            comp, queue = [start], deque([start])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            comps.append(sorted(comp))
        return comps

    def subgraph(self, vertices: Sequence[int]) -> "BipartiteGraph":
        """Induced subgraph, keeping source-matrix ids."""
        s = self.n_structors
        chosen = sorted(set(vertices))
        st = [v for v in chosen if v < s]
        fn = [v for v in chosen if v >= s]
        new_index = {v: k for k, v in enumerate(st)}
        new_index.update({v: len(st) + k for k, v in enumerate(fn)})
        edges = frozenset(
            (new_index[u], new_index[w]) for u, w in self.edges if u in new_index and w in new_index
        )
        return BipartiteGraph(
            tuple(self.structor_labels[v] for v in st),
            tuple(self.functional_labels[v - s] for v in fn),
            edges,
            tuple(self.structor_ids[v] for v in st),
            tuple(self.functional_ids[v - s] for v in fn),
        )


def to_bipartite(m: ModularityMatrix) -> BipartiteGraph:
    s = len(m.structors)
    return BipartiteGraph(
        m.structors,
        m.functionals,
        frozenset((j, s + i) for i, j in m.ones()),
        tuple(range(s)),
        tuple(range(len(m.functionals))),
    )


@dataclass(frozen=True, eq=False)
class LaplacianBundle:
    graph: BipartiteGraph
    degree: np.ndarray
    adjacency: np.ndarray
    laplacian: np.ndarray
    eigenvalues: Optional[np.ndarray] = None
    eigenvectors: Optional[np.ndarray] = None

    def __post_init__(self):
        for arr in (self.degree, self.adjacency, self.laplacian, self.eigenvalues, self.eigenvectors):
            if arr is not None:
                arr.setflags(write=False)


def build_laplacian(g: BipartiteGraph) -> LaplacianBundle:
    n = g.n_vertices
    adjacency = np.zeros((n, n), dtype=np.int64)
    for u, w in g.edges:
        adjacency[u, w] = adjacency[w, u] = 1
    degree = np.diag(adjacency.sum(axis=1))
    return LaplacianBundle(g, degree, adjacency, degree - adjacency)


def with_eigenpairs(b: LaplacianBundle, tol_eig: float = TOL_EIG, tol_orth: float = TOL_ORTH) -> LaplacianBundle:
    values, vectors = eigendecompose_symmetric(b.laplacian, tol_eig=tol_eig, tol_orth=tol_orth)
    return replace(b, eigenvalues=values, eigenvectors=vectors)


def laplacian_of(m: ModularityMatrix, tol_eig: float = TOL_EIG, tol_orth: float = TOL_ORTH) -> LaplacianBundle:
    return with_eigenpairs(build_laplacian(to_bipartite(m)), tol_eig, tol_orth)


def _require_eigenpairs(b: LaplacianBundle) -> LaplacianBundle:
    return b if b.eigenvalues is not None else with_eigenpairs(b)


def zero_eigen_count(b: LaplacianBundle, tol_eig: float = TOL_EIG) -> int:
    b = _require_eigenpairs(b)
    scale = max(1.0, float(np.max(np.abs(b.eigenvalues)))) if b.eigenvalues.size else 1.0
    return int(np.sum(np.abs(b.eigenvalues) <= tol_eig * scale))


def null_space(b: LaplacianBundle, tol_eig: float = TOL_EIG) -> np.ndarray:
    b = _require_eigenpairs(b)
    k = zero_eigen_count(b, tol_eig)
    return b.eigenvectors[:, :k]


def _vertex_modules(g: BipartiteGraph, groups: Sequence[Sequence[int]]) -> list[Module]:
    s = g.n_structors
    return [
        Module(
            frozenset(g.structor_ids[v] for v in grp if v < s),
            frozenset(g.functional_ids[v - s] for v in grp if v >= s),
        )
        for grp in groups
    ]


def zero_eigen_clusters(
    b: LaplacianBundle, tol_eig: float = TOL_EIG, tol_support: float = TOL_SUPPORT
) -> list[list[int]]:
    """Vertex clusters read off the Laplacian null space.

    The projector ``Z Z^T`` onto the null space does not depend on which
    orthonormal basis the solver returned; two vertices share a cluster
    when they are linked by a chain of projector entries above
    ``tol_support``.
    """
    z = null_space(b, tol_eig)
    n, k = z.shape
    projector = z @ z.T
    if n and np.any(np.diag(projector) <= tol_support):
        raise DegenerateNullSpace("a vertex lies outside the null-space support; check tol_eig/tol_support")
    linked = np.abs(projector) > tol_support
    seen = [False] * n
    clusters = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        cluster, queue = [start], deque([start])
        while queue:
            x = queue.popleft()
            for y in np.flatnonzero(linked[x]):
                if not seen[y]:
                    seen[y] = True
                    cluster.append(int(y))
                    queue.append(int(y))
        clusters.append(sorted(cluster))
    if len(clusters) != k:
        raise DegenerateNullSpace(
            f"null space of dimension {k} yields {len(clusters)} support clusters; check tolerances"
        )
    return clusters


def modules_from_zero_eigenvectors(
    m_or_bundle, tol_eig: float = TOL_EIG, tol_support: float = TOL_SUPPORT
) -> ModulePartition:
    """Modules as the support clusters of the Laplacian's zero-eigenvalue eigenspace."""
    b = m_or_bundle if isinstance(m_or_bundle, LaplacianBundle) else laplacian_of(m_or_bundle, tol_eig)
    b = _require_eigenpairs(b)
    clusters = zero_eigen_clusters(b, tol_eig, tol_support)
    g = b.graph
    modules = _vertex_modules(g, clusters)
    if g.structor_ids != tuple(range(g.n_structors)) or g.functional_ids != tuple(
        range(len(g.functional_labels))
    ):
        # subgraph: ids are source coordinates, so no source matrix to order against
        return ModulePartition(tuple(modules), ())
    return partition_from_modules(g.to_matrix(), modules)


def fiedler_vector(b: LaplacianBundle, tol_eig: float = TOL_EIG) -> np.ndarray:
    """Eigenvector of the smallest nonzero Laplacian eigenvalue of a connected graph.

    Sign-normalized so that its first nonzero entry is positive.
    """
    b = _require_eigenpairs(b)
    n = b.graph.n_vertices
    zeros = zero_eigen_count(b, tol_eig)
    if n < 2 or zeros != 1:
        raise NotConnected(f"expected one connected component, Laplacian has {zeros} zero eigenvalues")
    return sign_normalize(b.eigenvectors[:, 1])


def fiedler_value(b: LaplacianBundle, tol_eig: float = TOL_EIG) -> float:
    fiedler_vector(b, tol_eig)
    return float(b.eigenvalues[1])


@dataclass(frozen=True)
class FiedlerSplit:
    partition: ModulePartition  # two parts: non-negative side first
    cut: tuple[tuple[int, int], ...]  # (functional id, structor id) edges crossing the cut
    positive: tuple[int, ...]  # local vertices
    negative: tuple[int, ...]


def fiedler_split(
    b: LaplacianBundle, v: Optional[np.ndarray] = None, tol_support: float = TOL_SUPPORT
) -> FiedlerSplit:
    """Bipartition a connected component by the sign pattern of its Fiedler vector.

    Entries within ``tol_support`` of zero go to the positive part.  The two
    parts are reported in source-matrix coordinates; a part may hold only
    structors or only functionals.
    """
    if v is None:
        v = fiedler_vector(b)
    v = np.asarray(v, dtype=float)
    g = b.graph
    positive = tuple(int(i) for i in np.flatnonzero(v >= -tol_support))
    negative = tuple(int(i) for i in np.flatnonzero(v < -tol_support))
    if not positive or not negative:
        raise DegenerateSplit("Fiedler vector is single-signed; it is numerically zero or not a Fiedler vector")
    neg = set(negative)
    s = g.n_structors
    cut = tuple(
        sorted(
            (g.functional_ids[w - s], g.structor_ids[u])
            for u, w in g.edges
            if (u in neg) != (w in neg)
        )
    )
    parts = _vertex_modules(g, [positive, negative])
    return FiedlerSplit(ModulePartition(tuple(parts), cut), cut, positive, negative)


def component_bundle(
    m: ModularityMatrix, module: Module, tol_eig: float = TOL_EIG, tol_orth: float = TOL_ORTH
) -> LaplacianBundle:
    """Laplacian (with eigenpairs) of the subgraph induced by one module."""
    g = to_bipartite(m)
    s = len(m.structors)
    vertices = sorted(module.structors) + [s + f for f in sorted(module.functionals)]
    return with_eigenpairs(build_laplacian(g.subgraph(vertices)), tol_eig, tol_orth)


def to_dot(g: BipartiteGraph, partition: Optional[ModulePartition] = None, name: str = "modularity") -> str:
    """Graphviz DOT text: structors as boxes, functionals as ellipses.

    With a partition, each module becomes a ``cluster_<k>`` subgraph.
    """

    def node_id(vertex: int) -> str:
        if g.is_structor(vertex):
            return f"s{g.structor_ids[vertex]}"
        return f"f{g.functional_ids[vertex - g.n_structors]}"

    def node_line(vertex: int) -> str:
        shape = "box" if g.is_structor(vertex) else "ellipse"
        label = g.label(vertex).replace("\\", "\\\\").replace('"', '\\"')
        return f'{node_id(vertex)} [label="{label}", shape={shape}];'

    lines = [f'graph "{name}" {{']
    placed: set[int] = set()
    if partition is not None:
        s_local = {sid: k for k, sid in enumerate(g.structor_ids)}
        f_local = {fid: g.n_structors + k for k, fid in enumerate(g.functional_ids)}
        for k, mod in enumerate(partition.modules):
            members = [s_local[x] for x in sorted(mod.structors) if x in s_local]
            members += [f_local[x] for x in sorted(mod.functionals) if x in f_local]
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="module {k}";')
            lines.extend(f"    {node_line(v)}" for v in members)
            lines.append("  }")
            placed.update(members)
    lines.extend(f"  {node_line(v)}" for v in range(g.n_vertices) if v not in placed)
    lines.extend(f"  {node_id(u)} -- {node_id(w)};" for u, w in g.sorted_edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
