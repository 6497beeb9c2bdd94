"""One pass of the iterative design procedure: modularize, measure, judge, suggest.

The loop itself spans human edit sessions; :func:`run_cycle` performs a
single pass and never edits concepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .concepts import ApplicationOntology
from .eigen import TOL_EIG, TOL_ORTH, TOL_SUPPORT
from .errors import DegenerateSplit, InputError, NotConnected, NoViolations, SupportOverlapUnresolved
from .laplacian import (
    build_laplacian,
    component_bundle,
    fiedler_split,
    fiedler_vector,
    modules_from_zero_eigenvectors,
    to_bipartite,
    with_eigenpairs,
)
from .matrix import (
    Module,
    ModularityMatrix,
    ModulePartition,
    ProprietyReport,
    check_propriety,
    find_blocks_combinatorial,
    locate_outliers,
    module_sparsity,
    partition_from_modules,
)
from .spectral import modules_from_leading_eigenvectors, symmetrize

ROUTES = ("laplacian", "spectral-mm", "combinatorial")


@dataclass(frozen=True)
class Tolerances:
    tol_eig: float = TOL_EIG
    tol_orth: float = TOL_ORTH
    tol_support: float = TOL_SUPPORT

    def __post_init__(self):
        for name in ("tol_eig", "tol_orth", "tol_support"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")


@dataclass(frozen=True)
class ModularityCriterion:
    max_outliers: int = 0
    max_module_sparsity: float = 0.5
    require_propriety: bool = True

    def __post_init__(self):
        if isinstance(self.max_outliers, bool) or not isinstance(self.max_outliers, int) or self.max_outliers < 0:
            raise InputError("max_outliers must be a non-negative integer")
        if not 0.0 <= self.max_module_sparsity <= 1.0:
            raise InputError("max_module_sparsity must lie in [0, 1]")


@dataclass(frozen=True)
class CycleMetrics:
    cycle: int
    outlier_count: int
    sparsity: tuple[Fraction, ...]
    rank: int
    module_count: int


@dataclass(frozen=True)
class DesignState:
    matrix: ModularityMatrix
    ontology: Optional[ApplicationOntology] = None
    cycle: int = 0
    partition: Optional[ModulePartition] = None
    propriety: Optional[ProprietyReport] = None
    metrics: tuple[CycleMetrics, ...] = ()


@dataclass(frozen=True)
class Violation:
    clause: str  # "outliers" | "sparsity" | "propriety"
    detail: dict = field(hash=False)


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def satisfied(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Suggestion:
    kind: str  # "outlier" | "split-module" | "dependency"
    message: str
    patch: dict = field(hash=False)


def modularize(
    m: ModularityMatrix,
    route: str = "laplacian",
    scheme: str = "bipartite-adjacency",
    tol: Tolerances = Tolerances(),
) -> ModulePartition:
    """Modules of ``m`` by the chosen route; all routes agree on valid input."""
    if route == "combinatorial":
        return find_blocks_combinatorial(m)
    if route == "laplacian":
        bundle = with_eigenpairs(build_laplacian(to_bipartite(m)), tol.tol_eig, tol.tol_orth)
        return modules_from_zero_eigenvectors(bundle, tol.tol_eig, tol.tol_support)
    if route == "spectral-mm":
        try:
            return modules_from_leading_eigenvectors(symmetrize(m, scheme), tol.tol_support, tol.tol_eig, tol.tol_orth)
        except SupportOverlapUnresolved as exc:
            return exc.fallback
    raise InputError(f"unknown route {route!r}; choose from {', '.join(ROUTES)}")


def _components_of(m: ModularityMatrix, mod: Module) -> list[Module]:
    g = to_bipartite(m)
    s = len(m.structors)
    vertices = sorted(mod.structors) + [s + f for f in sorted(mod.functionals)]
    sub = g.subgraph(vertices)
    n_s = sub.n_structors
    return [
        Module(
            frozenset(sub.structor_ids[v] for v in comp if v < n_s),
            frozenset(sub.functional_ids[v - n_s] for v in comp if v >= n_s),
        )
        for comp in sub.components()
    ]


def split_module(m: ModularityMatrix, mod: Module, tol: Tolerances = Tolerances()):
    """Fiedler bipartition of one connected module, or ``None`` if it cannot be split
    into two parts that each keep a structor and a functional."""
    try:
        bundle = component_bundle(m, mod, tol.tol_eig, tol.tol_orth)
        split = fiedler_split(bundle, fiedler_vector(bundle, tol.tol_eig), tol.tol_support)
    except (NotConnected, DegenerateSplit):
        return None
    if any(not part.structors or not part.functionals for part in split.partition.modules):
        return None
    return split


def decouple_sparse_modules(
    m: ModularityMatrix,
    p: ModulePartition,
    max_sparsity: float,
    tol: Tolerances = Tolerances(),
) -> ModulePartition:
    """Split every module sparser than ``max_sparsity`` with Fiedler vectors, recursively.

    Edges crossing a cut become outliers.  Recursion stops at modules that
    pass the threshold or admit no two-sided split.
    """
    work = list(p.modules)
    final: list[Module] = []
    while work:
        mod = work.pop(0)
        if module_sparsity(m, mod) <= max_sparsity:
            final.append(mod)
            continue
        comps = _components_of(m, mod)
        if len(comps) > 1:
            work.extend(comps)
            continue
        split = split_module(m, mod, tol)
        if split is None:
            final.append(mod)
        else:
            work.extend(split.partition.modules)
    return partition_from_modules(m, final)


def _labels(m: ModularityMatrix, mod: Module) -> dict:
    return {
        "structors": [m.structors[s] for s in sorted(mod.structors)],
        "functionals": [m.functionals[f] for f in sorted(mod.functionals)],
    }


def run_cycle(
    state: DesignState,
    criterion: ModularityCriterion = ModularityCriterion(),
    route: str = "laplacian",
    tol: Tolerances = Tolerances(),
    scheme: str = "bipartite-adjacency",
) -> tuple[DesignState, Verdict]:
    m = state.matrix
    propriety = check_propriety(m)
    partition = modularize(m, route, scheme, tol)
    if route == "laplacian":
        partition = decouple_sparse_modules(m, partition, criterion.max_module_sparsity, tol)
    report = locate_outliers(m, partition)

    violations = []
    if len(report.outliers) > criterion.max_outliers:
        violations.append(
            Violation(
                "outliers",
                {
                    "count": len(report.outliers),
                    "limit": criterion.max_outliers,
                    "positions": [[m.functionals[f], m.structors[s]] for f, s in report.outliers],
                },
            )
        )
    for k, (mod, sp) in enumerate(zip(partition.modules, report.sparsity)):
        if sp > Fraction(criterion.max_module_sparsity):
            violations.append(
                Violation(
                    "sparsity",
                    {"module": k, "sparsity": sp, "limit": criterion.max_module_sparsity, **_labels(m, mod)},
                )
            )
    if criterion.require_propriety and not propriety.is_proper:
        violations.append(
            Violation(
                "propriety",
                {
                    "is_square": propriety.is_square,
                    "rank": propriety.rank,
                    "rows": propriety.row_count,
                    "columns": propriety.column_count,
                    "structor_dependencies": [[m.structors[j] for j in dep] for dep in propriety.structor_dependencies],
                    "functional_dependencies": [
                        [m.functionals[i] for i in dep] for dep in propriety.functional_dependencies
                    ],
                },
            )
        )

    cycle = state.cycle + 1
    metrics = CycleMetrics(cycle, len(report.outliers), report.sparsity, propriety.rank, len(partition.modules))
    new_state = replace(
        state,
        cycle=cycle,
        partition=partition,
        propriety=propriety,
        metrics=state.metrics + (metrics,),
    )
    return new_state, Verdict(tuple(violations))


def suggest_redesign(state: DesignState, verdict: Verdict, tol: Tolerances = Tolerances()) -> list[Suggestion]:
    """Advisory redesign steps, ordered: outliers, over-sparse modules, dependencies."""
    if verdict.satisfied:
        raise NoViolations("criterion satisfied; nothing to redesign")
    m, p = state.matrix, state.partition
    if p is None:
        raise InputError("state has no partition; run a cycle first")
    s_owner, f_owner = p.structor_owner(), p.functional_owner()
    suggestions: list[Suggestion] = []

    for v in verdict.violations:
        if v.clause != "outliers":
            continue
        for f, s in p.outliers:
            a, b = s_owner[s], f_owner[f]
            pair = {a, b}
            cut = [
                [m.functionals[ff], m.structors[ss]]
                for ff, ss in p.outliers
                if {s_owner[ss], f_owner[ff]} == pair
            ]
            suggestions.append(
                Suggestion(
                    "outlier",
                    f"structor {m.structors[s]!r} provides functional {m.functionals[f]!r} across modules "
                    f"{a} and {b}; reconsider this relation",
                    {
                        "op": "remove-provides",
                        "structor": m.structors[s],
                        "functional": m.functionals[f],
                        "fiedler_cut": {
                            "parts": [_labels(m, p.modules[a]), _labels(m, p.modules[b])],
                            "cut_edges": cut,
                        },
                    },
                )
            )

    for v in verdict.violations:
        if v.clause != "sparsity":
            continue
        mod = p.modules[v.detail["module"]]
        split = split_module(m, mod, tol)
        if split is None:
            suggestions.append(
                Suggestion(
                    "split-module",
                    f"module {v.detail['module']} has sparsity {float(v.detail['sparsity']):.3f}; "
                    "no two-sided Fiedler split exists, reconsider its concepts",
                    {"op": "review-module", **_labels(m, mod)},
                )
            )
            continue
        cut = [[m.functionals[f], m.structors[s]] for f, s in split.cut]
        suggestions.append(
            Suggestion(
                "split-module",
                f"module {v.detail['module']} has sparsity {float(v.detail['sparsity']):.3f}; "
                f"the Fiedler vector splits it by cutting {len(cut)} relation(s)",
                {
                    "op": "split-module",
                    "parts": [_labels(m, part) for part in split.partition.modules],
                    "cut_edges": cut,
                },
            )
        )

    for v in verdict.violations:
        if v.clause != "propriety":
            continue
        for dep in v.detail["structor_dependencies"]:
            suggestions.append(
                Suggestion(
                    "dependency",
                    f"structors {dep} are linearly dependent; merge or remove one",
                    {"op": "review-dependent-structors", "structors": dep},
                )
            )
        for dep in v.detail["functional_dependencies"]:
            suggestions.append(
                Suggestion(
                    "dependency",
                    f"functionals {dep} are linearly dependent; merge or remove one",
                    {"op": "review-dependent-functionals", "functionals": dep},
                )
            )
    return suggestions


def metrics_equal_except_cycle(a: CycleMetrics, b: CycleMetrics) -> bool:
    return replace(a, cycle=0) == replace(b, cycle=0)

