"""Modularity Matrix type and its exact (non-spectral) algebra.

Rows are functionals, columns are structors; element ``(f, s)`` is 1 when
structor ``s`` provides functional ``f``.  Everything here is integer or
rational arithmetic, so results are exact and reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    NonBinaryElement,
    PartitionMismatch,
    ZeroRowOrColumn,
)

Position = tuple[int, int]  # (functional index, structor index)


@dataclass(frozen=True)
class ModularityMatrix:
    structors: tuple[str, ...]
    functionals: tuple[str, ...]
    elements: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.functionals), len(self.structors)

    def array(self) -> np.ndarray:
        """Dense int64 copy of the elements, shape (functionals, structors)."""
        return np.array(self.elements, dtype=np.int64).reshape(self.shape)

    def ones(self) -> Iterator[Position]:
        for f, row in enumerate(self.elements):
            for s, value in enumerate(row):
                if value:
                    yield f, s

    def column(self, s: int) -> tuple[int, ...]:
        return tuple(row[s] for row in self.elements)

    def permuted(self, structor_perm: Sequence[int], functional_perm: Sequence[int]) -> "ModularityMatrix":
        """New matrix whose column k is old column ``structor_perm[k]`` (rows likewise)."""
        return ModularityMatrix(
            tuple(self.structors[j] for j in structor_perm),
            tuple(self.functionals[i] for i in functional_perm),
            tuple(tuple(self.elements[i][j] for j in structor_perm) for i in functional_perm),
        )


def build_matrix(
    structors: Sequence[str],
    functionals: Sequence[str],
    elements: Sequence[Sequence[int]],
) -> ModularityMatrix:
    """Validate labels and a binary grid and return a :class:`ModularityMatrix`."""
    structors = tuple(str(s) for s in structors)
    functionals = tuple(str(f) for f in functionals)
    for kind, labels in (("structor", structors), ("functional", functionals)):
        seen = set()
        for label in labels:
            if label in seen:
                raise DuplicateLabel(f"duplicate {kind} label {label!r}")
            seen.add(label)
    if not structors or not functionals:
        raise DimensionMismatch("a Modularity Matrix needs at least one structor and one functional")
    if len(elements) != len(functionals):
        raise DimensionMismatch(f"{len(elements)} rows for {len(functionals)} functionals")
    grid = []
    for i, row in enumerate(elements):
        if isinstance(row, (str, bytes)) or len(row) != len(structors):
            raise DimensionMismatch(
                f"row {functionals[i]!r} has {len(row)} entries for {len(structors)} structors"
            )
        for j, value in enumerate(row):
            # bool is an int subclass; JSON true/false is not a matrix element
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value not in (0, 1):
                raise NonBinaryElement(
                    f"element ({functionals[i]!r}, {structors[j]!r}) = {value!r} is not 0 or 1"
                )
        grid.append(tuple(int(v) for v in row))
    for i, row in enumerate(grid):
        if not any(row):
            raise ZeroRowOrColumn(functionals[i], "functional")
    for j, label in enumerate(structors):
        if not any(row[j] for row in grid):
            raise ZeroRowOrColumn(label, "structor")
    return ModularityMatrix(structors, functionals, tuple(grid))


def identity_matrix(n: int, prefix: tuple[str, str] = ("S", "F")) -> ModularityMatrix:
    return build_matrix(
        [f"{prefix[0]}{j + 1}" for j in range(n)],
        [f"{prefix[1]}{i + 1}" for i in range(n)],
        [[int(i == j) for j in range(n)] for i in range(n)],
    )


# ---------------------------------------------------------------------------
# Propriety


def _bareiss_rank(rows: list[list[int]]) -> int:
    a = [list(r) for r in rows]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    rank = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if a[r][c] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, n_rows):
            head = a[r][c]
            row = a[r]
            top = a[rank]
            for k in range(c + 1, n_cols):
                row[k] = (p * row[k] - head * top[k]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def rank_exact(m: ModularityMatrix) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    return _bareiss_rank([list(r) for r in m.elements])


def _rref(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(v) for v in r] for r in rows]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def _column_circuits(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """One minimal dependent column set per non-pivot column.

    In reduced row echelon form a non-pivot column holds the unique
    coefficients expressing it over the earlier pivot columns, so its
    support together with the column itself is a circuit.
    """
    if not rows:
        return []
    reduced, pivots = _rref(rows)
    pivot_set = set(pivots)
    circuits = []
    for j in range(len(rows[0])):
        if j in pivot_set:
            continue
        members = {j} | {pivots[r] for r in range(len(pivots)) if reduced[r][j] != 0}
        circuits.append(tuple(sorted(members)))
    return circuits


@dataclass(frozen=True)
class ProprietyReport:
    is_square: bool
    row_count: int
    column_count: int
    rank: int
    structor_dependencies: tuple[tuple[int, ...], ...]
    functional_dependencies: tuple[tuple[int, ...], ...]

    @property
    def is_proper(self) -> bool:
        return self.is_square and self.rank == self.row_count


def check_propriety(m: ModularityMatrix) -> ProprietyReport:
    rows = [list(r) for r in m.elements]
    n_rows, n_cols = m.shape
    return ProprietyReport(
        is_square=n_rows == n_cols,
        row_count=n_rows,
        column_count=n_cols,
        rank=rank_exact(m),
        structor_dependencies=tuple(_column_circuits(rows)),
        functional_dependencies=tuple(_column_circuits([list(c) for c in zip(*rows)])),
    )


# ---------------------------------------------------------------------------
# Partitions


@dataclass(frozen=True)
class Module:
    structors: frozenset[int]
    functionals: frozenset[int]

    @property
    def area(self) -> int:
        return len(self.structors) * len(self.functionals)


@dataclass(frozen=True)
class ModulePartition:
    modules: tuple[Module, ...]
    outliers: tuple[Position, ...] = ()

    def as_sets(self) -> frozenset[tuple[frozenset[int], frozenset[int]]]:
        """Order-free view, for comparing partitions from different routes."""
        return frozenset((mod.structors, mod.functionals) for mod in self.modules)

    def structor_owner(self) -> dict[int, int]:
        return {s: k for k, mod in enumerate(self.modules) for s in mod.structors}

    def functional_owner(self) -> dict[int, int]:
        return {f: k for k, mod in enumerate(self.modules) for f in mod.functionals}


def _module_key(m: ModularityMatrix, mod: Module):
    first_structor = min((m.structors[s] for s in mod.structors), default="")
    first_functional = min((m.functionals[f] for f in mod.functionals), default="")
    return (-mod.area, -(len(mod.structors) + len(mod.functionals)), first_structor, first_functional)


def canonical_modules(m: ModularityMatrix, modules: Iterable[Module]) -> tuple[Module, ...]:
    """Order modules by descending block area, then by first structor label."""
    return tuple(sorted(modules, key=lambda mod: _module_key(m, mod)))


def check_partition(m: ModularityMatrix, p: ModulePartition, bilateral: bool = True) -> None:
    """Raise :class:`PartitionMismatch` unless ``p`` partitions the labels of ``m``.

    ``bilateral`` additionally demands at least one structor and one
    functional per module.
    """
    n_f, n_s = m.shape
    for kind, count, attr in (("structor", n_s, "structors"), ("functional", n_f, "functionals")):
        seen: set[int] = set()
        for mod in p.modules:
            members = getattr(mod, attr)
            if seen & members:
                raise PartitionMismatch(f"{kind} indices {sorted(seen & members)} belong to two modules")
            seen |= members
        if seen != set(range(count)):
            missing = sorted(set(range(count)) - seen)
            extra = sorted(seen - set(range(count)))
            raise PartitionMismatch(f"{kind} cover mismatch: missing {missing}, out of range {extra}")
    if bilateral:
        for k, mod in enumerate(p.modules):
            if not mod.structors or not mod.functionals:
                raise PartitionMismatch(f"module {k} lacks structors or functionals")


def outlier_positions(m: ModularityMatrix, modules: Sequence[Module]) -> tuple[Position, ...]:
    s_owner = {s: k for k, mod in enumerate(modules) for s in mod.structors}
    f_owner = {f: k for k, mod in enumerate(modules) for f in mod.functionals}
    return tuple((f, s) for f, s in m.ones() if s_owner.get(s) != f_owner.get(f))


def partition_from_modules(m: ModularityMatrix, modules: Iterable[Module], bilateral: bool = True) -> ModulePartition:
    """Canonically ordered partition with outliers filled in from ``m``."""
    ordered = canonical_modules(m, modules)
    p = ModulePartition(ordered, outlier_positions(m, ordered))
    check_partition(m, p, bilateral=bilateral)
    return p


def find_blocks_combinatorial(m: ModularityMatrix) -> ModulePartition:
    """Connected components of the structor-functional graph, by BFS."""
    n_f, n_s = m.shape
    by_structor: list[list[int]] = [[] for _ in range(n_s)]
    by_functional: list[list[int]] = [[] for _ in range(n_f)]
    for f, s in m.ones():
        by_structor[s].append(f)
        by_functional[f].append(s)

    seen_s = [False] * n_s
    seen_f = [False] * n_f
    modules = []
    for start in range(n_s):
        if seen_s[start]:
            continue
        structors, functionals = {start}, set()
        seen_s[start] = True
        queue = deque([("s", start)])
        while queue:
            kind, idx = queue.popleft()
            if kind == "s":
                for f in by_structor[idx]:
                    if not seen_f[f]:
                        seen_f[f] = True
                        functionals.add(f)
                        queue.append(("f", f))
            else:
                for s in by_functional[idx]:
                    if not seen_s[s]:
                        seen_s[s] = True
                        structors.add(s)
                        queue.append(("s", s))
        modules.append(Module(frozenset(structors), frozenset(functionals)))
    return partition_from_modules(m, modules)


# ---------------------------------------------------------------------------
# Orthogonality, reordering, outliers


@dataclass(frozen=True)
class OrthogonalityReport:
    structor_products: dict[tuple[int, int], int] = field(hash=False)
    functional_products: dict[tuple[int, int], int] = field(hash=False)

    @property
    def is_orthogonal(self) -> bool:
        return not any(self.structor_products.values()) and not any(self.functional_products.values())

    def nonzero_structor_pairs(self) -> list[tuple[int, int]]:
        return [pair for pair, v in self.structor_products.items() if v]

    def nonzero_functional_pairs(self) -> list[tuple[int, int]]:
        return [pair for pair, v in self.functional_products.items() if v]


def orthogonality_report(m: ModularityMatrix, p: ModulePartition) -> OrthogonalityReport:
    """Integer scalar products of every cross-module column pair and row pair."""
    check_partition(m, p, bilateral=False)
    a = m.array()
    col_gram = a.T @ a
    row_gram = a @ a.T
    s_owner = p.structor_owner()
    f_owner = p.functional_owner()
    n_f, n_s = m.shape
    structor_products = {
        (i, j): int(col_gram[i, j])
        for i in range(n_s)
        for j in range(i + 1, n_s)
        if s_owner[i] != s_owner[j]
    }
    functional_products = {
        (i, j): int(row_gram[i, j])
        for i in range(n_f)
        for j in range(i + 1, n_f)
        if f_owner[i] != f_owner[j]
    }
    return OrthogonalityReport(structor_products, functional_products)


def reorder(
    m: ModularityMatrix, p: ModulePartition
) -> tuple[ModularityMatrix, tuple[int, ...], tuple[int, ...]]:
    """Permute rows and columns so every module is a contiguous diagonal block.

    Returns the reordered matrix and the structor and functional
    permutations; position ``k`` of a permutation holds the original index
    now found at ``k``.  Modules keep their original relative order inside
    a block.
    """
    check_partition(m, p, bilateral=False)
    ordered = canonical_modules(m, p.modules)
    structor_perm = tuple(s for mod in ordered for s in sorted(mod.structors))
    functional_perm = tuple(f for mod in ordered for f in sorted(mod.functionals))
    return m.permuted(structor_perm, functional_perm), structor_perm, functional_perm


@dataclass(frozen=True)
class OutlierReport:
    outliers: tuple[Position, ...]
    sparsity: tuple[Fraction, ...]  # aligned with the partition's modules


def module_sparsity(m: ModularityMatrix, mod: Module) -> Fraction:
    if mod.area == 0:
        return Fraction(0)
    inside = sum(m.elements[f][s] for f in mod.functionals for s in mod.structors)
    return 1 - Fraction(inside, mod.area)


def locate_outliers(m: ModularityMatrix, p: ModulePartition) -> OutlierReport:
    check_partition(m, p, bilateral=False)
    return OutlierReport(
        outliers=outlier_positions(m, p.modules),
        sparsity=tuple(module_sparsity(m, mod) for mod in p.modules),
    )
