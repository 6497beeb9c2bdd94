"""Command-line interface.

Exit codes: 0 success or criterion satisfied, 1 analysis found violations,
2 usage error, 3 input format error, 4 numerical failure.  Errors are
reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .concepts import SMALL_NUMBERS_CAP, check_ambiguities, distinguishability, minimal_tuple, validate_characterizations
from .concepts import build_matrix_from_relation
from .design import (
    ROUTES,
    CycleMetrics,
    DesignState,
    ModularityCriterion,
    Tolerances,
    modularize,
    run_cycle,
    suggest_redesign,
)
from .eigen import TOL_EIG, TOL_ORTH, TOL_SUPPORT
from .errors import ModulithError, NotDistinguishable, UsageError
from .io import (
    FormatError,
    characterization_to_document,
    dumps,
    load_application,
    load_matrix,
    matrix_to_document,
    partition_to_document,
    propriety_to_document,
    read_json,
    write_text,
)
from .laplacian import component_bundle, fiedler_split, fiedler_value, to_bipartite, to_dot
from .matrix import check_propriety, locate_outliers, orthogonality_report, reorder
from .spectral import SCHEMES

DEFAULT_MAX_CYCLES = 10


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    ontology: Optional[str] = None
    domains: list[str] = field(default_factory=list)
    route: str = "laplacian"
    scheme: str = "bipartite-adjacency"
    tolerances: Tolerances = field(default_factory=Tolerances)
    criterion: ModularityCriterion = field(default_factory=ModularityCriterion)
    output: Optional[str] = None
    matrix_output: Optional[str] = None
    format: str = "json"
    dot: Optional[str] = None
    history: Optional[str] = None
    max_cycles: int = DEFAULT_MAX_CYCLES
    cap: int = SMALL_NUMBERS_CAP


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


_CRITERION_KEYS = {
    "max-outliers": "max_outliers",
    "max-sparsity": "max_module_sparsity",
    "max-module-sparsity": "max_module_sparsity",
    "require-propriety": "require_propriety",
}


def _criterion(overrides: Sequence[str]) -> ModularityCriterion:
    values: dict = {}
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or key not in _CRITERION_KEYS:
            raise UsageError(f"--criterion expects KEY=VALUE with KEY in {sorted(_CRITERION_KEYS)}, got {item!r}")
        name = _CRITERION_KEYS[key]
        try:
            if name == "max_outliers":
                values[name] = int(raw)
            elif name == "max_module_sparsity":
                values[name] = float(raw)
            else:
                if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(raw)
                values[name] = raw.lower() in ("true", "1", "yes")
        except ValueError:
            raise UsageError(f"bad value for {key}: {raw!r}")
    try:
        return ModularityCriterion(**values)
    except ModulithError as exc:
        raise UsageError(str(exc))


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modulith", description="Modularity Matrix analysis and design-cycle tool.")
    parser.add_argument("--version", action="version", version=f"modulith {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    def common(p, *, matrix_input=True, spectral=False):
        if matrix_input:
            p.add_argument("--in", dest="input", metavar="MATRIX_JSON", required=True)
        p.add_argument("--out", dest="output", metavar="PATH", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
        if spectral:
            p.add_argument("--route", choices=ROUTES, default="laplacian")
            p.add_argument("--scheme", choices=SCHEMES, default="bipartite-adjacency")
            p.add_argument("--tol-eig", type=_positive_float, default=TOL_EIG)
            p.add_argument("--tol-orth", type=_positive_float, default=TOL_ORTH)
            p.add_argument("--tol-support", type=_positive_float, default=TOL_SUPPORT)

    common(sub.add_parser("check-propriety", help="rank and dependency report"))

    p = sub.add_parser("modularize", help="find modules by the chosen route")
    common(p, spectral=True)
    p.add_argument("--dot", metavar="PATH", help="also write a Graphviz DOT file")

    common(sub.add_parser("fiedler-split", help="Fiedler bipartition of every connected module"), spectral=True)

    p = sub.add_parser("conceptualize", help="validate an application ontology and build its matrix")
    common(p, matrix_input=False)
    p.add_argument("--ontology", required=True, metavar="APP_JSON")
    p.add_argument("--domain", dest="domains", action="append", default=[], metavar="DOMAIN_JSON")
    p.add_argument("--matrix-out", dest="matrix_output", metavar="PATH")
    p.add_argument("--cap", type=_positive_int, default=SMALL_NUMBERS_CAP)

    p = sub.add_parser("cycle", help="one pass of the design procedure")
    common(p, matrix_input=False, spectral=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", metavar="MATRIX_JSON")
    src.add_argument("--ontology", metavar="APP_JSON")
    p.add_argument("--domain", dest="domains", action="append", default=[], metavar="DOMAIN_JSON")
    p.add_argument("--cap", type=_positive_int, default=SMALL_NUMBERS_CAP)
    p.add_argument("--criterion", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--history", metavar="REPORT_JSON", help="previous cycle report to continue from")
    p.add_argument("--max-cycles", type=_positive_int, default=None)

    p = sub.add_parser("export-dot", help="Graphviz DOT of the bipartite graph with module clusters")
    p.add_argument("--in", dest="input", metavar="MATRIX_JSON", required=True)
    p.add_argument("--out", dest="output", metavar="PATH")
    p.add_argument("--route", choices=ROUTES, default="laplacian")
    p.add_argument("--scheme", choices=SCHEMES, default="bipartite-adjacency")
    p.add_argument("--tol-eig", type=_positive_float, default=TOL_EIG)
    p.add_argument("--tol-orth", type=_positive_float, default=TOL_ORTH)
    p.add_argument("--tol-support", type=_positive_float, default=TOL_SUPPORT)
    return parser


def _max_cycles_default() -> int:
    raw = os.environ.get("MODULITH_MAX_CYCLES")
    if raw is None:
        return DEFAULT_MAX_CYCLES
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"MODULITH_MAX_CYCLES: {exc}")


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = _build_parser().parse_args(list(argv))
    cfg = RunConfig(subcommand=ns.subcommand)
    for name in ("input", "ontology", "domains", "route", "scheme", "output", "matrix_output", "format", "dot", "history", "cap"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "tol_eig"):
        cfg.tolerances = Tolerances(ns.tol_eig, ns.tol_orth, ns.tol_support)
    if hasattr(ns, "criterion"):
        cfg.criterion = _criterion(ns.criterion)
    if ns.subcommand == "cycle":
        cfg.max_cycles = ns.max_cycles if ns.max_cycles is not None else _max_cycles_default()
    return cfg


# ---------------------------------------------------------------------------
# Rendering


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(item, ensure_ascii=False)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, dict) and item:
                sub = _render_text(item, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}")
                lines.extend(sub[1:])
            elif isinstance(item, list) and item and any(isinstance(x, (dict, list)) for x in item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item, ensure_ascii=False)}")
        return lines
    return [f"{pad}{json.dumps(value, ensure_ascii=False)}"]


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        plain = json.loads(dumps(report))
        return "\n".join(_render_text(plain)) + "\n"
    return dumps(report)


def _emit(cfg: RunConfig, report: dict) -> None:
    text = render(report, cfg.format)
    if cfg.output:
        write_text(cfg.output, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check_propriety(cfg: RunConfig) -> int:
    m = load_matrix(cfg.input)
    r = check_propriety(m)
    _emit(cfg, {"command": "check-propriety", "propriety": propriety_to_document(m, r)})
    return 0 if r.is_proper else 1


def _modularize_report(m, p, route: str, scheme: str) -> dict:
    outliers = locate_outliers(m, p)
    reordered, s_perm, f_perm = reorder(m, p)
    ortho = orthogonality_report(m, p)
    report = {
        "route": route,
        "shape": {"functionals": m.shape[0], "structors": m.shape[1]},
        **partition_to_document(m, p, outliers.sparsity),
        "orthogonal": ortho.is_orthogonal,
        "permutations": {
            "structors": [m.structors[j] for j in s_perm],
            "functionals": [m.functionals[i] for i in f_perm],
        },
        "reordered": matrix_to_document(reordered),
    }
    if route == "spectral-mm":
        report["scheme"] = scheme
    return report


def _cmd_modularize(cfg: RunConfig) -> int:
    m = load_matrix(cfg.input)
    p = modularize(m, cfg.route, cfg.scheme, cfg.tolerances)
    report = {"command": "modularize", **_modularize_report(m, p, cfg.route, cfg.scheme)}
    if cfg.dot:
        write_text(cfg.dot, to_dot(to_bipartite(m), p))
    _emit(cfg, report)
    return 0


def _cmd_fiedler_split(cfg: RunConfig) -> int:
    m = load_matrix(cfg.input)
    p = modularize(m, cfg.route, cfg.scheme, cfg.tolerances)
    tol = cfg.tolerances
    splits = []
    for k, mod in enumerate(p.modules):
        entry = {
            "module": k,
            "structors": [m.structors[s] for s in sorted(mod.structors)],
            "functionals": [m.functionals[f] for f in sorted(mod.functionals)],
        }
        if len(mod.structors) + len(mod.functionals) < 2:
            entry["split"] = None
        else:
            bundle = component_bundle(m, mod, tol.tol_eig, tol.tol_orth)
            split = fiedler_split(bundle, tol_support=tol.tol_support)
            entry["fiedler_value"] = fiedler_value(bundle, tol.tol_eig)
            entry["split"] = {
                **partition_to_document(m, split.partition),
                "cut_edges": [{"functional": m.functionals[f], "structor": m.structors[s]} for f, s in split.cut],
            }
            del entry["split"]["outliers"]
        splits.append(entry)
    _emit(cfg, {"command": "fiedler-split", "route": cfg.route, "components": splits})
    return 0


def _cmd_conceptualize(cfg: RunConfig) -> int:
    app = load_application(cfg.ontology, cfg.domains, cfg.cap)
    ont = app.ontology
    validate_characterizations(app.characterizations, ont.source_domains)
    ambiguous = [
        {"term": term, "domains": list(names)}
        for term, names in check_ambiguities(app.domains)
        if term in set(ont.concepts())
    ]
    superfluous = distinguishability(app.characterizations)
    try:
        minimal = list(minimal_tuple(app.characterizations))
    except NotDistinguishable:
        minimal = None
    m = build_matrix_from_relation(ont, app.relation)
    if cfg.matrix_output:
        write_text(cfg.matrix_output, dumps(matrix_to_document(m)))
    report = {
        "command": "conceptualize",
        "ontology": {
            "source_domains": list(ont.source_domains),
            "levels": ont.levels(),
        },
        "ambiguous_terms": ambiguous,
        "superfluous_pairs": [list(pair) for pair in superfluous],
        "minimal_tuple": minimal,
        "characterizations": [characterization_to_document(c) for c in app.characterizations],
        "matrix": matrix_to_document(m),
    }
    _emit(cfg, report)
    return 1 if ambiguous or superfluous else 0


def _history(path: str) -> tuple[int, tuple[CycleMetrics, ...], list]:
    doc = read_json(path)
    try:
        raw = doc["metrics"]
        metrics = tuple(
            CycleMetrics(
                int(e["cycle"]),
                int(e["outlier_count"]),
                tuple(Fraction(str(x)) for x in e["sparsity"]),
                int(e["rank"]),
                int(e["module_count"]),
            )
            for e in raw
        )
        return int(doc["cycle"]), metrics, raw
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: not a cycle report: {exc!r}") from exc


def _metrics_document(mt: CycleMetrics) -> dict:
    return {
        "cycle": mt.cycle,
        "outlier_count": mt.outlier_count,
        "sparsity": list(mt.sparsity),
        "rank": mt.rank,
        "module_count": mt.module_count,
    }


def _cmd_cycle(cfg: RunConfig) -> int:
    ontology = None
    if cfg.ontology:
        app = load_application(cfg.ontology, cfg.domains, cfg.cap)
        ontology = app.ontology
        m = build_matrix_from_relation(app.ontology, app.relation)
    else:
        m = load_matrix(cfg.input)

    cycle, metrics = 0, ()
    if cfg.history:
        cycle, metrics, _ = _history(cfg.history)
    if cycle >= cfg.max_cycles:
        _emit(
            cfg,
            {
                "command": "cycle",
                "cycle": cycle,
                "terminated": True,
                "reason": f"cycle budget of {cfg.max_cycles} exhausted",
                "metrics": [_metrics_document(x) for x in metrics],
            },
        )
        return 1

    state = DesignState(m, ontology, cycle, metrics=metrics)
    state, verdict = run_cycle(state, cfg.criterion, cfg.route, cfg.tolerances, cfg.scheme)
    suggestions = [] if verdict.satisfied else suggest_redesign(state, verdict, cfg.tolerances)
    report = {
        "command": "cycle",
        "cycle": state.cycle,
        "max_cycles": cfg.max_cycles,
        "criterion": {
            "max_outliers": cfg.criterion.max_outliers,
            "max_module_sparsity": cfg.criterion.max_module_sparsity,
            "require_propriety": cfg.criterion.require_propriety,
        },
        "verdict": {
            "satisfied": verdict.satisfied,
            "violations": [{"clause": v.clause, **v.detail} for v in verdict.violations],
        },
        "metrics": [_metrics_document(x) for x in state.metrics],
        "suggestions": [{"kind": s.kind, "message": s.message, "patch": s.patch} for s in suggestions],
        "propriety": propriety_to_document(m, state.propriety),
        **_modularize_report(m, state.partition, cfg.route, cfg.scheme),
    }
    _emit(cfg, report)
    return 0 if verdict.satisfied else 1


def _cmd_export_dot(cfg: RunConfig) -> int:
    m = load_matrix(cfg.input)
    p = modularize(m, cfg.route, cfg.scheme, cfg.tolerances)
    text = to_dot(to_bipartite(m), p)
    if cfg.output:
        write_text(cfg.output, text)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "check-propriety": _cmd_check_propriety,
    "modularize": _cmd_modularize,
    "fiedler-split": _cmd_fiedler_split,
    "conceptualize": _cmd_conceptualize,
    "cycle": _cmd_cycle,
    "export-dot": _cmd_export_dot,
}


def dispatch(cfg: RunConfig) -> int:
    return _COMMANDS[cfg.subcommand](cfg)


def _report_error(exc: ModulithError) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return exc.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ModulithError as exc:
        return _report_error(exc)
    try:
        return dispatch(cfg)
    except ModulithError as exc:
        return _report_error(exc)


if __name__ == "__main__":
    sys.exit(main())
