"""Conceptualization: domain/application ontologies, characterizations, matrix assembly."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from numbers import Real
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    CapExceeded,
    CycleDetected,
    DuplicateAttribute,
    DuplicateConcept,
    NotASubclass,
    NotDistinguishable,
    OntologyError,
    RoleConflict,
    UndeclaredConcept,
    UnknownConcept,
    UnknownDomain,
)
from .matrix import ModularityMatrix, build_matrix

SMALL_NUMBERS_CAP = 7


@dataclass(frozen=True)
class DomainOntology:
    name: str
    concepts: tuple[str, ...]
    subclass_edges: frozenset[tuple[str, str]] = frozenset()

    def children(self, parent: str) -> list[str]:
        return sorted(c for p, c in self.subclass_edges if p == parent)


def _find_cycle(concepts: Sequence[str], edges: Iterable[tuple[str, str]]) -> list[str] | None:
    succ: dict[str, list[str]] = {c: [] for c in concepts}
    for p, c in sorted(edges):
        succ[p].append(c)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in concepts:
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                path.pop()
            elif state.get(nxt) == 1:
                return path[path.index(nxt):] + [nxt]
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return None


def load_domain_ontology(document: Mapping) -> DomainOntology:
    """Validate a ``{"name", "concepts", "subclass_edges"}`` document."""
    try:
        name = str(document["name"])
        concepts = [str(c) for c in document.get("concepts", [])]
        raw_edges = document.get("subclass_edges", [])
        edges = [(str(p), str(c)) for p, c in raw_edges]
    except (KeyError, TypeError, ValueError) as exc:
        raise OntologyError(f"malformed domain ontology document: {exc}") from exc
    seen: set[str] = set()
    for c in concepts:
        if c in seen:
            raise DuplicateConcept(f"concept {c!r} declared twice in domain {name!r}")
        seen.add(c)
    for p, c in edges:
        for end in (p, c):
            if end not in seen:
                raise UndeclaredConcept(f"edge {p!r} -> {c!r} uses undeclared concept {end!r} in {name!r}")
    cycle = _find_cycle(concepts, edges)
    if cycle:
        raise CycleDetected(f"subclass cycle in {name!r}: {' -> '.join(cycle)}")
    return DomainOntology(name, tuple(concepts), frozenset(edges))


@dataclass(frozen=True)
class IntegrityConcept:
    concept: str
    domain: str
    parent: str


@dataclass(frozen=True)
class ApplicationOntology:
    source_domains: tuple[str, ...]
    highest: tuple[tuple[str, str], ...]  # (concept, domain)
    integrity: tuple[IntegrityConcept, ...]
    cap: int = SMALL_NUMBERS_CAP

    def concepts(self) -> tuple[str, ...]:
        """Highest concepts, then integrity concepts in declaration order."""
        return tuple(c for c, _ in self.highest) + tuple(ic.concept for ic in self.integrity)

    def domain_of(self, concept: str) -> str:
        for c, d in self.highest:
            if c == concept:
                return d
        for ic in self.integrity:
            if ic.concept == concept:
                return ic.domain
        raise UnknownConcept(f"{concept!r} is not in the application ontology")

    def levels(self) -> list[list[str]]:
        level = {c: 0 for c, _ in self.highest}
        for ic in self.integrity:
            level[ic.concept] = level[ic.parent] + 1
        depth = max(level.values(), default=-1) + 1
        return [[c for c in self.concepts() if level[c] == k] for k in range(depth)]


def _domain_map(domains: Union[Mapping[str, DomainOntology], Iterable[DomainOntology]]) -> dict[str, DomainOntology]:
    if isinstance(domains, Mapping):
        return dict(domains)
    return {d.name: d for d in domains}


def derive_application_ontology(
    domains: Union[Mapping[str, DomainOntology], Iterable[DomainOntology]],
    highest: Sequence[tuple[str, str]],
    expansions: Sequence[tuple[str, str, str]] = (),
    cap: int = SMALL_NUMBERS_CAP,
    source_domains: Sequence[str] | None = None,
) -> ApplicationOntology:
    """Build an application ontology from chosen highest concepts and subclass expansions.

    ``highest`` is a list of ``(concept, domain)``; ``expansions`` a list of
    ``(parent, child, domain)`` where ``parent`` is already in the ontology
    and ``parent -> child`` is a subclass edge of ``domain``.
    """
    by_name = _domain_map(domains)
    sources = tuple(source_domains) if source_domains is not None else tuple(by_name)
    for d in sources:
        if d not in by_name:
            raise UnknownDomain(f"domain {d!r} is not loaded")

    def domain(name: str) -> DomainOntology:
        if name not in sources:
            raise UnknownDomain(f"domain {name!r} is not a source domain of this application")
        return by_name[name]

    present: dict[str, int] = {}
    for concept, dname in highest:
        if concept not in domain(dname).concepts:
            raise UnknownConcept(f"highest concept {concept!r} is not in domain {dname!r}")
        if concept in present:
            raise DuplicateConcept(f"concept {concept!r} selected twice")
        present[concept] = 0

    integrity = []
    for parent, child, dname in expansions:
        dom = domain(dname)
        if parent not in present:
            raise UnknownConcept(f"expansion parent {parent!r} is not yet in the application ontology")
        if (parent, child) not in dom.subclass_edges:
            raise NotASubclass(f"{child!r} is not a subclass of {parent!r} in domain {dname!r}")
        if child in present:
            raise DuplicateConcept(f"concept {child!r} selected twice")
        present[child] = present[parent] + 1
        integrity.append(IntegrityConcept(child, dname, parent))

    counts: dict[int, int] = {}
    for lvl in present.values():
        counts[lvl] = counts.get(lvl, 0) + 1
    for lvl, count in sorted(counts.items()):
        if count > cap:
            raise CapExceeded(f"level {lvl} holds {count} concepts, above the small-numbers cap {cap}")
    return ApplicationOntology(sources, tuple((c, d) for c, d in highest), tuple(integrity), cap)


def check_ambiguities(
    domains: Union[Mapping[str, DomainOntology], Iterable[DomainOntology]],
) -> list[tuple[str, tuple[str, ...]]]:
    """Terms declared in two or more domains, with the domains that declare them."""
    where: dict[str, list[str]] = {}
    for dom in _domain_map(domains).values():
        for c in dom.concepts:
            where.setdefault(c, []).append(dom.name)
    return [(term, tuple(names)) for term, names in sorted(where.items()) if len(names) > 1]


# ---------------------------------------------------------------------------
# Characterizations


@dataclass(frozen=True)
class NumericType:
    name: str  # e.g. "integer", "real"


@dataclass(frozen=True)
class Literals:
    values: frozenset[str]


@dataclass(frozen=True)
class Intervals:
    spans: frozenset[tuple[Real, Real]]


Range = Union[Real, NumericType, Literals, Intervals]


def literal(*values: str) -> Literals:
    return Literals(frozenset(values))


def intervals(*spans: tuple[Real, Real]) -> Intervals:
    return Intervals(frozenset((lo, hi) for lo, hi in spans))


def ranges_equal(a: Range, b: Range) -> bool:
    number_a = isinstance(a, Real) and not isinstance(a, bool)
    number_b = isinstance(b, Real) and not isinstance(b, bool)
    if number_a or number_b:
        return number_a and number_b and a == b
    return type(a) is type(b) and a == b


@dataclass(frozen=True)
class ConceptCharacterization:
    concept: str
    domain: str
    tuple: tuple[tuple[str, Range], ...] = field(default=())

    def __post_init__(self):
        names = [attr for attr, _ in self.tuple]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise DuplicateAttribute(f"{self.concept!r} repeats attributes {sorted(dup)}")

    def attributes(self) -> dict[str, Range]:
        return dict(self.tuple)


def validate_characterizations(
    chars: Iterable[ConceptCharacterization], source_domains: Sequence[str]
) -> None:
    for ch in chars:
        if ch.domain not in source_domains:
            raise UnknownDomain(f"characterization of {ch.concept!r} names domain {ch.domain!r}, not a source domain")


def _indistinguishable(a: ConceptCharacterization, b: ConceptCharacterization, attrs: frozenset[str] | None) -> bool:
    if a.domain != b.domain:
        return False
    ta, tb = a.attributes(), b.attributes()
    if attrs is not None:
        ta = {k: v for k, v in ta.items() if k in attrs}
        tb = {k: v for k, v in tb.items() if k in attrs}
    if ta.keys() != tb.keys():
        return False
    return all(ranges_equal(ta[k], tb[k]) for k in ta)


def _clashing_pairs(chars: Sequence[ConceptCharacterization], attrs: frozenset[str] | None) -> list[tuple[str, str]]:
    return [
        tuple(sorted((a.concept, b.concept)))
        for a, b in itertools.combinations(chars, 2)
        if _indistinguishable(a, b, attrs)
    ]


def distinguishability(chars: Iterable[ConceptCharacterization]) -> list[tuple[str, str]]:
    """Pairs of concepts whose characterizations cannot be told apart (superfluous terms)."""
    return sorted(_clashing_pairs(list(chars), None))


def minimal_tuple(chars: Iterable[ConceptCharacterization]) -> tuple[str, ...]:
    """Smallest attribute subset that keeps every pair distinguishable.

    Subsets are tried by ascending size and, within a size, in
    lexicographic order of the sorted attribute names.
    """
    chars = list(chars)
    clashes = _clashing_pairs(chars, None)
    if clashes:
        raise NotDistinguishable(f"indistinguishable on the full attribute set: {clashes}")
    names = sorted({attr for ch in chars for attr, _ in ch.tuple})
    for size in range(len(names) + 1):
        for subset in itertools.combinations(names, size):
            if not _clashing_pairs(chars, frozenset(subset)):
                return subset
    return tuple(names)  # unreachable: the full set already distinguishes


# ---------------------------------------------------------------------------
# Structor/functional relation -> Modularity Matrix


@dataclass(frozen=True)
class ProvidesRelation:
    structors: tuple[str, ...]
    functionals: tuple[str, ...]
    pairs: frozenset[tuple[str, str]]  # (structor, functional)


def build_matrix_from_relation(ont: ApplicationOntology, rel: ProvidesRelation) -> ModularityMatrix:
    """Numerical Modularity Matrix of ``rel``, columns and rows in ontology order."""
    known = set(ont.concepts())
    overlap = set(rel.structors) & set(rel.functionals)
    if overlap:
        raise RoleConflict(f"concepts tagged both structor and functional: {sorted(overlap)}")
    for c in itertools.chain(rel.structors, rel.functionals):
        if c not in known:
            raise UnknownConcept(f"{c!r} is not in the application ontology")
    structor_set, functional_set = set(rel.structors), set(rel.functionals)
    for s, f in rel.pairs:
        if s not in structor_set:
            raise UnknownConcept(f"{s!r} provides {f!r} but is not tagged as a structor")
        if f not in functional_set:
            raise UnknownConcept(f"{s!r} provides {f!r} but {f!r} is not tagged as a functional")
    order = ont.concepts()
    columns = [c for c in order if c in structor_set]
    rows = [c for c in order if c in functional_set]
    grid = [[int((s, f) in rel.pairs) for s in columns] for f in rows]
    return build_matrix(columns, rows, grid)
