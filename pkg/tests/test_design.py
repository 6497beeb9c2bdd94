from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from helpers import block_diagonal, labelled
from modulith.design import (
    DesignState,
    ModularityCriterion,
    Tolerances,
    decouple_sparse_modules,
    metrics_equal_except_cycle,
    modularize,
    run_cycle,
    split_module,
    suggest_redesign,
)
from modulith.errors import InputError, NoViolations
from modulith.fixtures import atm, atm_duplicated_column, four_module, two_block_outlier
from modulith.matrix import find_blocks_combinatorial

ROUTES = ("laplacian", "spectral-mm", "combinatorial")


@pytest.mark.parametrize("route", ROUTES)
def test_routes_agree_on_fixtures(route):
    for m in (atm(), four_module(), two_block_outlier()):
        assert modularize(m, route).as_sets() == find_blocks_combinatorial(m).as_sets()


@pytest.mark.parametrize("route", ROUTES)
def test_atm_cycle_is_satisfied(route):
    state, verdict = run_cycle(DesignState(atm()), route=route)
    assert verdict.satisfied
    assert state.cycle == 1
    assert state.metrics[-1].rank == 5 and state.metrics[-1].outlier_count == 0
    assert state.metrics[-1].module_count == 3
    with pytest.raises(NoViolations):
        suggest_redesign(state, verdict)


def test_duplicated_column_violates_propriety():
    state, verdict = run_cycle(DesignState(atm_duplicated_column()))
    clauses = [v.clause for v in verdict.violations]
    assert clauses == ["propriety"]
    suggestions = suggest_redesign(state, verdict)
    assert [s.kind for s in suggestions] == ["dependency"]
    assert suggestions[0].patch["structors"] == ["checking-account", "checking-account-copy"]


def test_propriety_clause_can_be_disabled():
    _, verdict = run_cycle(DesignState(atm_duplicated_column()), ModularityCriterion(require_propriety=False))
    assert verdict.satisfied


def test_outlier_fixture_on_laplacian_route():
    state, verdict = run_cycle(DesignState(two_block_outlier()))
    assert [v.clause for v in verdict.violations] == ["outliers"]
    assert verdict.violations[0].detail["positions"] == [["F3", "S2"]]
    assert state.partition.outliers == ((2, 1),)
    (suggestion,) = suggest_redesign(state, verdict)
    assert suggestion.kind == "outlier"
    assert (suggestion.patch["functional"], suggestion.patch["structor"]) == ("F3", "S2")
    cut = suggestion.patch["fiedler_cut"]
    assert cut["cut_edges"] == [["F3", "S2"]]
    assert {tuple(p["structors"]) for p in cut["parts"]} == {("S1", "S2"), ("S3", "S4")}


def test_outlier_fixture_on_combinatorial_route_reports_sparsity():
    state, verdict = run_cycle(DesignState(two_block_outlier()), route="combinatorial")
    (violation,) = verdict.violations
    assert violation.clause == "sparsity" and violation.detail["sparsity"] == Fraction(9, 16)
    (suggestion,) = suggest_redesign(state, verdict)
    assert suggestion.kind == "split-module"
    assert suggestion.patch["cut_edges"] == [["F3", "S2"]]
    # the suggested parts are the blocks left once the coupling element is removed
    m = two_block_outlier()
    grid = m.array()
    grid[2, 1] = 0
    decoupled = find_blocks_combinatorial(labelled(grid))
    expected = {
        (tuple(m.structors[s] for s in sorted(mod.structors)), tuple(m.functionals[f] for f in sorted(mod.functionals)))
        for mod in decoupled.modules
    }
    assert {(tuple(p["structors"]), tuple(p["functionals"])) for p in suggestion.patch["parts"]} == expected


def test_looser_criterion_accepts_outlier_fixture():
    criterion = ModularityCriterion(max_outliers=1)
    _, verdict = run_cycle(DesignState(two_block_outlier()), criterion)
    assert verdict.satisfied
    _, verdict = run_cycle(DesignState(two_block_outlier()), ModularityCriterion(max_module_sparsity=0.6), route="combinatorial")
    assert verdict.satisfied


def test_suggestions_are_ordered_by_kind():
    # outlier coupling plus a duplicated functional row
    grid = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 1, 1]])
    m = labelled(grid)
    state, verdict = run_cycle(DesignState(m))
    kinds = [s.kind for s in suggest_redesign(state, verdict)]
    assert kinds == sorted(kinds, key=["outlier", "split-module", "dependency"].index)
    assert kinds[0] == "outlier" and kinds[-1] == "dependency"


def test_decoupling_three_block_chain():
    grid = block_diagonal([np.ones((k, k), int) for k in (4, 3, 2)])
    grid[4, 3] = grid[7, 6] = 1
    m = labelled(grid)
    p = decouple_sparse_modules(m, find_blocks_combinatorial(m), 0.3)
    assert len(p.modules) == 3 and p.outliers == ((4, 3), (7, 6))


def test_split_module_rejects_one_sided_parts():
    # a star: one structor providing three functionals splits only into lone vertices
    m = labelled([[1], [1], [1]])
    assert split_module(m, find_blocks_combinatorial(m).modules[0]) is None


def test_rerun_changes_only_cycle_counter():
    state, verdict = run_cycle(DesignState(atm()))
    again, verdict2 = run_cycle(state)
    assert verdict == verdict2 and again.cycle == 2
    assert again.partition == state.partition and again.propriety == state.propriety
    assert metrics_equal_except_cycle(again.metrics[0], again.metrics[1])
    assert again.metrics[0].cycle == 1 and again.metrics[1].cycle == 2


def test_invalid_settings():
    with pytest.raises(InputError):
        Tolerances(tol_eig=0)
    with pytest.raises(InputError):
        ModularityCriterion(max_module_sparsity=1.5)
    with pytest.raises(InputError):
        ModularityCriterion(max_outliers=-1)
    with pytest.raises(InputError):
        modularize(atm(), "magic")
