from __future__ import annotations

import numpy as np
import pytest

from helpers import dense_laplacian, enumerate_ratio_cuts, labelled, nx_components, random_grid
from modulith.errors import DegenerateSplit, NotConnected
from modulith.fixtures import atm, two_block_outlier
from modulith.laplacian import (
    build_laplacian,
    component_bundle,
    fiedler_split,
    fiedler_value,
    fiedler_vector,
    laplacian_of,
    modules_from_zero_eigenvectors,
    null_space,
    to_bipartite,
    to_dot,
    zero_eigen_count,
)
from modulith.matrix import Module, find_blocks_combinatorial


def test_atm_graph_shape_and_degrees():
    g = to_bipartite(atm())
    assert g.n_vertices == 10 and len(g.edges) == 7
    b = build_laplacian(g)
    # bank-account provides three functionals; open-account is provided by three structors
    assert np.diag(b.degree).tolist() == [1, 2, 2, 1, 1, 3, 1, 1, 1, 1]
    assert np.array_equal(b.laplacian, dense_laplacian(atm().array()))


def test_laplacian_is_symmetric_with_zero_row_sums():
    rng = np.random.default_rng(21)
    for _ in range(30):
        b = build_laplacian(to_bipartite(labelled(random_grid(rng))))
        assert np.array_equal(b.laplacian, b.laplacian.T)
        assert not b.laplacian.sum(axis=1).any()


def test_bundle_is_read_only():
    b = laplacian_of(atm())
    with pytest.raises(ValueError):
        b.laplacian[0, 0] = 5


def test_zero_multiplicity_counts_components():
    rng = np.random.default_rng(22)
    for _ in range(40):
        m = labelled(random_grid(rng))
        assert zero_eigen_count(laplacian_of(m)) == len(nx_components(m))


def test_atm_zero_eigenvector_supports():
    b = laplacian_of(atm())
    z = null_space(b)
    sizes = sorted(int(np.sum(np.abs(z[:, k]) > 1e-6)) for k in range(z.shape[1]))
    assert sizes == [2, 2, 6]


def test_modules_from_zero_eigenvectors_match_components():
    rng = np.random.default_rng(23)
    for _ in range(40):
        m = labelled(random_grid(rng))
        assert modules_from_zero_eigenvectors(m).as_sets() == nx_components(m)


def test_fiedler_needs_connected_graph():
    with pytest.raises(NotConnected):
        fiedler_vector(laplacian_of(atm()))


def test_outlier_fixture_fiedler_split():
    m = two_block_outlier()
    b = laplacian_of(m)
    v = fiedler_vector(b)
    assert v[np.flatnonzero(v)[0]] > 0
    split = fiedler_split(b, v)
    assert split.cut == ((2, 1),)
    assert split.partition.as_sets() == {
        (frozenset({0, 1}), frozenset({0, 1})),
        (frozenset({2, 3}), frozenset({2, 3})),
    }
    assert fiedler_value(b) == pytest.approx(np.linalg.eigvalsh(dense_laplacian(m.array()))[1], abs=1e-9)


def test_fiedler_split_minimizes_ratio_cut_on_outlier_fixture():
    m = two_block_outlier()
    split = fiedler_split(laplacian_of(m))
    best = min(enumerate_ratio_cuts(m.array()))
    side = frozenset(split.positive) if 0 in split.positive else frozenset(split.negative)
    assert best[2] == side and best[1] == len(split.cut) == 1


def test_single_signed_vector_is_rejected():
    b = laplacian_of(two_block_outlier())
    with pytest.raises(DegenerateSplit):
        fiedler_split(b, np.ones(8))


def test_component_bundle_keeps_source_ids():
    m = atm()
    b = component_bundle(m, Module(frozenset({0, 1, 2}), frozenset({0, 1, 2})))
    assert b.graph.structor_ids == (0, 1, 2) and b.graph.functional_ids == (0, 1, 2)
    split = fiedler_split(b)
    # cuts are reported in source coordinates
    assert all(f in {0, 1, 2} and s in {0, 1, 2} for f, s in split.cut)


def test_recursive_split_of_three_block_chain():
    # full 3x3, 2x2 and 1x1 blocks joined in a chain by single couplings; 12 vertices
    sizes = (3, 2, 1)
    grid = np.zeros((6, 6), int)
    lo = 0
    for k in sizes:
        grid[lo : lo + k, lo : lo + k] = 1
        lo += k
    grid[3, 2] = grid[5, 4] = 1
    m = labelled(grid)

    first = fiedler_split(laplacian_of(m))
    best = min(c[0] for c in enumerate_ratio_cuts(grid))
    side = frozenset(first.positive) if 0 in first.positive else frozenset(first.negative)
    assert [c[0] for c in enumerate_ratio_cuts(grid) if c[2] == side] == [best]

    work = list(first.partition.modules)
    parts, cuts = [], list(first.cut)
    while work:
        part = work.pop()
        b = component_bundle(m, part)
        if np.count_nonzero(b.adjacency) // 2 == len(part.structors) * len(part.functionals):
            parts.append(part)  # full block: nothing to split
            continue
        split = fiedler_split(b)
        cuts.extend(split.cut)
        work.extend(split.partition.modules)
    assert sorted(cuts) == [(3, 2), (5, 4)]
    assert {(p.structors, p.functionals) for p in parts} == {
        (frozenset(range(0, 3)), frozenset(range(0, 3))),
        (frozenset(range(3, 5)), frozenset(range(3, 5))),
        (frozenset({5}), frozenset({5})),
    }


def test_identity_laplacian_is_three_path_blocks():
    m = labelled(np.eye(3, dtype=int))
    lap = laplacian_of(m).laplacian
    # structor j (vertex j) pairs with functional j (vertex 3 + j)
    for j in range(3):
        assert lap[np.ix_([j, 3 + j], [j, 3 + j])].tolist() == [[1, -1], [-1, 1]]
    assert np.count_nonzero(lap) == 12


def test_two_vertex_fiedler():
    b = laplacian_of(labelled([[1]]))
    assert fiedler_value(b) == pytest.approx(2.0)
    assert np.allclose(fiedler_vector(b), [2**-0.5, -(2**-0.5)])


def test_dot_export():
    m = atm()
    text = to_dot(to_bipartite(m), find_blocks_combinatorial(m))
    assert text.startswith('graph "modularity" {') and text.endswith("}\n")
    assert text.count("subgraph cluster_") == 3
    assert text.count("shape=box") == 5 and text.count("shape=ellipse") == 5
    assert text.count(" -- ") == 7
    assert 's0 [label="bank-account", shape=box];' in text
