"""JSON interchange: matrices, ontologies, partitions and reports.

Canonical form is ``json.dumps(sort_keys=True, indent=2)`` plus a trailing
newline, with floats rounded to 12 significant digits, so that reports
diff cleanly and repeat byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Real
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .concepts import (
    ApplicationOntology,
    ConceptCharacterization,
    DomainOntology,
    Intervals,
    Literals,
    NumericType,
    ProvidesRelation,
    Range,
    SMALL_NUMBERS_CAP,
    derive_application_ontology,
    load_domain_ontology,
)
from .errors import InputError
from .matrix import ModularityMatrix, ModulePartition, ProprietyReport, build_matrix


class FormatError(InputError):
    pass


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        value = float(f"{float(obj):.12g}")
        return 0.0 if value == 0 else value
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Matrix


def matrix_from_document(doc: Any) -> ModularityMatrix:
    if not isinstance(doc, Mapping):
        raise FormatError("matrix document must be a JSON object")
    missing = [k for k in ("structors", "functionals", "elements") if k not in doc]
    if missing:
        raise FormatError(f"matrix document lacks keys {missing}")
    if not all(isinstance(doc[k], list) for k in ("structors", "functionals", "elements")):
        raise FormatError("structors, functionals and elements must be arrays")
    if not all(isinstance(x, str) for x in doc["structors"] + doc["functionals"]):
        raise FormatError("labels must be strings")
    if not all(isinstance(row, list) for row in doc["elements"]):
        raise FormatError("elements must be an array of rows")
    return build_matrix(doc["structors"], doc["functionals"], doc["elements"])


def matrix_to_document(m: ModularityMatrix) -> dict:
    return {
        "structors": list(m.structors),
        "functionals": list(m.functionals),
        "elements": [list(r) for r in m.elements],
    }


def load_matrix(path) -> ModularityMatrix:
    return matrix_from_document(read_json(path))


def partition_to_document(m: ModularityMatrix, p: ModulePartition, sparsity=None) -> dict:
    modules = []
    for k, mod in enumerate(p.modules):
        entry = {
            "index": k,
            "structors": [m.structors[s] for s in sorted(mod.structors)],
            "functionals": [m.functionals[f] for f in sorted(mod.functionals)],
        }
        if sparsity is not None:
            entry["sparsity"] = sparsity[k]
        modules.append(entry)
    return {
        "modules": modules,
        "outliers": [{"functional": m.functionals[f], "structor": m.structors[s]} for f, s in p.outliers],
    }


def propriety_to_document(m: ModularityMatrix, r: ProprietyReport) -> dict:
    return {
        "is_square": r.is_square,
        "is_proper": r.is_proper,
        "rank": r.rank,
        "row_count": r.row_count,
        "column_count": r.column_count,
        "structor_dependencies": [[m.structors[j] for j in dep] for dep in r.structor_dependencies],
        "functional_dependencies": [[m.functionals[i] for i in dep] for dep in r.functional_dependencies],
    }


# ---------------------------------------------------------------------------
# Ontologies


def range_from_document(doc: Any) -> Range:
    if isinstance(doc, bool):
        raise FormatError("a boolean is not a legal attribute range")
    if isinstance(doc, Real):
        return doc
    if isinstance(doc, str):
        return Literals(frozenset([doc]))
    if isinstance(doc, Mapping) and len(doc) == 1:
        (kind, value), = doc.items()
        if kind == "type" and isinstance(value, str):
            return NumericType(value)
        if kind == "literals" and isinstance(value, list):
            return Literals(frozenset(str(v) for v in value))
        if kind == "intervals" and isinstance(value, list):
            try:
                return Intervals(frozenset((lo, hi) for lo, hi in value))
            except (TypeError, ValueError) as exc:
                raise FormatError(f"intervals must be [lo, hi] pairs: {value!r}") from exc
    raise FormatError(f"unrecognised attribute range {doc!r}")


def range_to_document(r: Range) -> Any:
    if isinstance(r, NumericType):
        return {"type": r.name}
    if isinstance(r, Literals):
        return {"literals": sorted(r.values)}
    if isinstance(r, Intervals):
        return {"intervals": [list(span) for span in sorted(r.spans)]}
    return r


def characterization_from_document(doc: Mapping) -> ConceptCharacterization:
    try:
        return ConceptCharacterization(
            str(doc["concept"]),
            str(doc["domain"]),
            tuple((str(item["attr"]), range_from_document(item["range"])) for item in doc.get("tuple", [])),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed characterization {doc!r}") from exc


def characterization_to_document(ch: ConceptCharacterization) -> dict:
    return {
        "concept": ch.concept,
        "domain": ch.domain,
        "tuple": [{"attr": a, "range": range_to_document(r)} for a, r in ch.tuple],
    }


def load_domain(path) -> DomainOntology:
    doc = read_json(path)
    if not isinstance(doc, Mapping):
        raise FormatError(f"{path}: domain ontology must be a JSON object")
    return load_domain_ontology(doc)


def domain_to_document(d: DomainOntology) -> dict:
    return {"name": d.name, "concepts": list(d.concepts), "subclass_edges": [list(e) for e in sorted(d.subclass_edges)]}


class ApplicationDocument:
    """Parsed application-ontology document: ontology, characterizations and relation."""

    def __init__(
        self,
        ontology: ApplicationOntology,
        characterizations: list[ConceptCharacterization],
        relation: ProvidesRelation,
        domains: Mapping[str, DomainOntology],
    ):
        self.domains = dict(domains)
        self.ontology = ontology
        self.characterizations = characterizations
        self.relation = relation


def application_from_document(
    doc: Any, domains: Mapping[str, DomainOntology], cap: int = SMALL_NUMBERS_CAP
) -> ApplicationDocument:
    if not isinstance(doc, Mapping):
        raise FormatError("application ontology must be a JSON object")
    try:
        source_domains = [str(d) for d in doc["domains"]]
        highest = [(str(h["concept"]), str(h["domain"])) for h in doc["highest"]]
        expansions = [(str(e["parent"]), str(e["child"]), str(e["domain"])) for e in doc.get("expansions", [])]
        chars = [characterization_from_document(c) for c in doc.get("characterizations", [])]
        structors = tuple(str(s) for s in doc.get("structors", []))
        functionals = tuple(str(f) for f in doc.get("functionals", []))
        pairs = frozenset((str(s), str(f)) for s, f in doc.get("provides", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed application ontology: {exc!r}") from exc
    ontology = derive_application_ontology(domains, highest, expansions, cap=cap, source_domains=source_domains)
    return ApplicationDocument(ontology, chars, ProvidesRelation(structors, functionals, pairs), domains)


def load_application(app_path, domain_paths=(), cap: int = SMALL_NUMBERS_CAP) -> ApplicationDocument:
    """Load an application ontology, resolving each domain from ``domain_paths``
    or else from ``<name>.json`` beside the application file."""
    doc = read_json(app_path)
    domains: dict[str, DomainOntology] = {}
    for p in domain_paths:
        d = load_domain(p)
        domains[d.name] = d
    if isinstance(doc, Mapping) and isinstance(doc.get("domains"), list):
        base = Path(app_path).parent
        for name in doc["domains"]:
            if name not in domains and (base / f"{name}.json").exists():
                domains[name] = load_domain(base / f"{name}.json")
    return application_from_document(doc, domains, cap)
