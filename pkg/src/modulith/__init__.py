"""Modularity Matrix analysis: exact propriety/orthogonality checks, spectral
module detection, Fiedler decoupling and an ontology-driven design cycle."""

__version__ = "0.1.0"

from .errors import ModulithError
from .matrix import (
    ModularityMatrix,
    Module,
    ModulePartition,
    ProprietyReport,
    build_matrix,
    check_propriety,
    find_blocks_combinatorial,
    locate_outliers,
    orthogonality_report,
    rank_exact,
    reorder,
)
from .laplacian import (
    BipartiteGraph,
    LaplacianBundle,
    build_laplacian,
    fiedler_split,
    fiedler_vector,
    modules_from_zero_eigenvectors,
    to_bipartite,
    to_dot,
)
from .eigen import eigendecompose_symmetric
from .spectral import SymmetrizedMatrix, modules_from_leading_eigenvectors, symmetrize
from .design import DesignState, ModularityCriterion, Tolerances, modularize, run_cycle, suggest_redesign

__all__ = [
    "BipartiteGraph",
    "DesignState",
    "LaplacianBundle",
    "ModularityCriterion",
    "ModularityMatrix",
    "Module",
    "ModulePartition",
    "ModulithError",
    "ProprietyReport",
    "SymmetrizedMatrix",
    "Tolerances",
    "build_laplacian",
    "build_matrix",
    "check_propriety",
    "eigendecompose_symmetric",
    "fiedler_split",
    "fiedler_vector",
    "find_blocks_combinatorial",
    "locate_outliers",
    "modularize",
    "modules_from_leading_eigenvectors",
    "modules_from_zero_eigenvectors",
    "orthogonality_report",
    "rank_exact",
    "reorder",
    "run_cycle",
    "suggest_redesign",
    "symmetrize",
    "to_bipartite",
    "to_dot",
]
