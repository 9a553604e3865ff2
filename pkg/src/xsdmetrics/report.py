"""Metric reports, their deterministic renderings, DOT export and corpus runs.

Corpus manifest grammar (line oriented; blank lines and lines starting with
``#`` are ignored)::

    [target <name>]
    entry=<path>              # repeatable, at least one
    main=<directory-or-glob>  # optional
    catalog=<catalog file>    # optional
    expect.<field>=<value>    # optional; <value> may end in "+-<tolerance>"

Paths are relative to the manifest's directory. ``<field>`` is any name of
:meth:`MetricReport.flat_fields`.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .counting import CountingReport, counting_report
from .cxsd import Weight, WeightCache, compute_cxsd
from .loader import LoadReport, PathLike, ResolutionCatalog, load_schema_set
from .model import SchemaComponent, SchemaError, SchemaSet
from .subtyping import (
    EXPLICIT,
    HIDDEN_DERIVATION,
    Ratio,
    build_graph,
    compute_dpf,
    compute_dpr,
    polymorphism_table,
    reachability,
)

REPORT_VERSION = 1


@dataclass(frozen=True)
class TypeRow:
    namespace: str
    name: str
    kind: str
    e_ct: int
    pe_ct: int
    oe_ct: int
    unsatisfiable: int


@dataclass(frozen=True)
class MetricReport:
    entries: tuple[str, ...]
    main_scope: Optional[str]
    catalog_digest: str
    counts: CountingReport
    cxsd: Weight
    dpr: Ratio
    dpf: Ratio
    srr: Optional[Ratio]
    v_s: int
    v_rm_gs: int
    v_rm_gsh: int
    recursion_weight: Optional[int] = None
    partial_flags: tuple[str, ...] = ()
    unresolved_locations: tuple[tuple[str, str], ...] = ()
    type_rows: tuple[TypeRow, ...] = ()
    tool_version: str = __version__

    @property
    def partial(self) -> bool:
        return bool(self.partial_flags or self.unresolved_locations)

    @property
    def unsatisfiable_positions(self) -> int:
        return sum(r.unsatisfiable for r in self.type_rows)

    def flat_fields(self) -> list[tuple[str, str]]:
        c = self.counts
        fields = [
            ("loc", c.loc), ("files", c.files),
            ("ct", c.ct), ("st", c.st), ("el", c.el), ("mg", c.mg), ("at", c.at), ("ag", c.ag),
            ("all_global", c.all_global), ("wildcards", c.wildcards),
            ("aet", c.aet), ("aet_elements", c.aet_elements), ("aet_types", c.aet_types),
            ("sg", c.sg), ("sg_heads", c.sg_heads), ("td", c.td),
            ("size_category_loc", c.size_category_loc), ("size_category_ct", c.size_category_ct),
            ("cxsd", self.cxsd),
            ("cxsd_constant", self.cxsd.constant),
            ("cxsd_recursion_coeff", self.cxsd.recursion_coeff),
        ]
        if self.recursion_weight is not None:
            fields.append(("recursion_weight", self.recursion_weight))
            fields.append(("cxsd_value", self.cxsd.eval(self.recursion_weight)))
        fields += [
            ("dpr", self.dpr.rounded()),
            ("dpf", self.dpf.rounded()),
            ("srr", self.srr.rounded() if self.srr is not None else "n/a"),
            ("v_s", self.v_s), ("v_rm_gs", self.v_rm_gs), ("v_rm_gsh", self.v_rm_gsh),
            ("unsatisfiable_positions", self.unsatisfiable_positions),
            ("partial", "yes" if self.partial else "no"),
        ]
        return [(k, str(v)) for k, v in fields]


def _display_name(schema_set: SchemaSet, c: SchemaComponent) -> str:
    if c.name is not None:
        return c.name.local_name
    owner = schema_set.component(c.context) if c.context is not None else None
    prefix = owner.label() + "/" if owner is not None and owner.id != c.id else ""
    return f"{prefix}anonymous@{c.line}"


def _namespace(schema_set: SchemaSet, c: SchemaComponent) -> str:
    if c.name is not None:
        return c.name.namespace_uri
    return schema_set.document(c.owner_document).target_namespace


def _ratio_json(r: Optional[Ratio]) -> Optional[dict]:
    if r is None:
        return None
    return {"value": r.rounded(), "numerator": r.numerator, "denominator": r.denominator}


def build_report(
    schema_set: SchemaSet,
    load_report: Optional[LoadReport] = None,
    *,
    entries: Sequence[str] = (),
    main_scope: Optional[str] = None,
    catalog: Optional[ResolutionCatalog] = None,
    recursion_weight: Optional[int] = None,
) -> MetricReport:
    if recursion_weight is not None and recursion_weight < 1:
        raise ValueError("recursion weight must be an integer >= 1")
    table = polymorphism_table(schema_set)
    rows = []
    for r in table:
        c = schema_set.component(r.type_id)
        rows.append(TypeRow(
            _namespace(schema_set, c), _display_name(schema_set, c), c.kind.value,
            r.e_ct, r.pe_ct, r.oe_ct, r.unsatisfiable,
        ))
    rows.sort(key=lambda row: (row.namespace, row.name, row.kind))
    reach = reachability(schema_set)
    load_report = load_report or LoadReport()
    return MetricReport(
        entries=tuple(entries),
        main_scope=main_scope,
        catalog_digest=catalog.digest if catalog is not None else "none",
        counts=counting_report(schema_set),
        cxsd=compute_cxsd(schema_set, WeightCache(schema_set)),
        dpr=compute_dpr(schema_set, table),
        dpf=compute_dpf(schema_set, table),
        srr=reach.srr if reach.v_s else None,
        v_s=reach.v_s,
        v_rm_gs=len(reach.v_rm_gs),
        v_rm_gsh=len(reach.v_rm_gsh),
        recursion_weight=recursion_weight,
        partial_flags=tuple(load_report.partial_namespaces),
        unresolved_locations=tuple(load_report.unresolved),
        type_rows=tuple(rows),
    )


def analyze(
    entries: Sequence[PathLike],
    main_scope: Optional[PathLike] = None,
    catalog: Optional[ResolutionCatalog] = None,
    *,
    recursion_weight: Optional[int] = None,
    strict: bool = False,
) -> MetricReport:
    schema_set, load_report = load_schema_set(entries, main_scope, catalog, strict=strict)
    return build_report(
        schema_set,
        load_report,
        entries=[os.fspath(e) for e in entries],
        main_scope=os.fspath(main_scope) if main_scope is not None else None,
        catalog=catalog,
        recursion_weight=recursion_weight,
    )


# -- renderings ---------------------------------------------------------------


def to_json(report: MetricReport) -> str:
    c = report.counts
    data = {
        "report_version": REPORT_VERSION,
        "tool_version": report.tool_version,
        "input": {
            "entries": list(report.entries),
            "main_scope": report.main_scope,
            "catalog_digest": report.catalog_digest,
        },
        "counts": {k: getattr(c, k) for k in CountingReport.__dataclass_fields__},
        "cxsd": {
            "display": str(report.cxsd),
            "constant": report.cxsd.constant,
            "recursion_coeff": report.cxsd.recursion_coeff,
            "recursion_weight": report.recursion_weight,
            "value": report.cxsd.eval(report.recursion_weight) if report.recursion_weight else None,
        },
        "dpr": _ratio_json(report.dpr),
        "dpf": _ratio_json(report.dpf),
        "srr": _ratio_json(report.srr),
        "graph": {"v_s": report.v_s, "v_rm_gs": report.v_rm_gs, "v_rm_gsh": report.v_rm_gsh},
        "partial": report.partial,
        "partial_flags": list(report.partial_flags),
        "unresolved_locations": [list(u) for u in report.unresolved_locations],
        "unsatisfiable_positions": report.unsatisfiable_positions,
        "polymorphism": [
            {
                "namespace": r.namespace, "name": r.name, "kind": r.kind,
                "e_ct": r.e_ct, "pe_ct": r.pe_ct, "oe_ct": r.oe_ct,
                "unsatisfiable": r.unsatisfiable,
            }
            for r in report.type_rows
        ],
        "fields": dict(report.flat_fields()),
    }
    return json.dumps(data, indent=2, ensure_ascii=True) + "\n"


def to_csv(report: MetricReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value"])
    writer.writerows(report.flat_fields())
    return buf.getvalue()


def to_text(report: MetricReport) -> str:
    fields = report.flat_fields()
    width = max(len(k) for k, _ in fields)
    lines = [f"{k.ljust(width)}  {v}" for k, v in fields]
    if report.partial_flags:
        lines.append("")
        lines.append("unresolved namespaces (PARTIAL):")
        lines.extend(f"  {ns or '(no namespace)'}" for ns in report.partial_flags)
    if report.type_rows:
        lines.append("")
        lines.append("complex type                              E   PE   OE")
        for r in report.type_rows:
            label = f"{{{r.namespace}}}{r.name}" if r.namespace else r.name
            flag = "  UNSATISFIABLE" if r.unsatisfiable else ""
            lines.append(f"{label:<40} {r.e_ct:>3} {r.pe_ct:>4} {r.oe_ct:>4}{flag}")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": to_json, "csv": to_csv, "text": to_text}


def parse_text_fields(text: str) -> dict[str, str]:
    """Inverse of the field block of :func:`to_text`."""
    out = {}
    for line in text.splitlines():
        if not line.strip():
            break
        key, _, value = line.partition("  ")
        out[key.strip()] = value.strip()
    return out


# -- DOT ----------------------------------------------------------------------


def vertex_id(c: SchemaComponent) -> str:
    return f"{c.name.namespace_uri}#{c.name.local_name}#{c.kind.value}"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(schema_set: SchemaSet, hidden: bool = False) -> str:
    graph = build_graph(schema_set, hidden=hidden)
    ids = {v: vertex_id(schema_set.component(v)) for v in graph.vertices}
    lines = ["digraph schema_components {"]
    for v in sorted(graph.vertices, key=ids.__getitem__):
        c = schema_set.component(v)
        attrs = [f"label={_dot_quote(c.name.local_name)}"]
        if v in graph.main_vertices:
            attrs += ["style=filled", 'fillcolor="lightgrey"', "main=true"]
        lines.append(f"  {_dot_quote(ids[v])} [{', '.join(attrs)}];")
    edge_lines = []
    for i, j, kind in graph.edges:
        head = f"  {_dot_quote(ids[i])} -> {_dot_quote(ids[j])}"
        if kind == EXPLICIT:
            edge_lines.append(f"{head};")
        else:
            label = "derivation" if kind == HIDDEN_DERIVATION else "substitution"
            edge_lines.append(f"{head} [style=dashed, kind={label}];")
    lines.extend(sorted(edge_lines))
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- corpus -------------------------------------------------------------------


class ManifestError(SchemaError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass
class Target:
    name: str
    line: int
    entries: list[str] = field(default_factory=list)
    main: Optional[str] = None
    catalog: Optional[str] = None
    expected: dict[str, str] = field(default_factory=dict)


@dataclass
class CorpusManifest:
    targets: list[Target]

    @classmethod
    def parse(cls, path: PathLike) -> "CorpusManifest":
        path = Path(path)
        base = path.resolve().parent
        text = path.read_text(encoding="utf-8")
        targets: list[Target] = []
        names: set[str] = set()
        current: Optional[Target] = None

        def resolve(p: str) -> str:
            return str(base / p)

        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                header = line[1:-1].strip()
                if not header.startswith("target ") or not header[7:].strip():
                    raise ManifestError(str(path), lineno, f"bad section header {line!r}")
                name = header[7:].strip()
                if name in names:
                    raise ManifestError(str(path), lineno, f"duplicate target {name!r}")
                names.add(name)
                current = Target(name, lineno)
                targets.append(current)
                continue
            if current is None:
                raise ManifestError(str(path), lineno, "key outside of a [target ...] section")
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not value:
                raise ManifestError(str(path), lineno, f"expected key=value, got {line!r}")
            if key == "entry":
                current.entries.append(resolve(value))
            elif key == "main":
                current.main = resolve(value)
            elif key == "catalog":
                current.catalog = resolve(value)
            elif key.startswith("expect."):
                fname = key[len("expect."):]
                if fname not in REPORT_FIELDS:
                    raise ManifestError(str(path), lineno, f"unknown report field {fname!r}")
                current.expected[fname] = value
            else:
                raise ManifestError(str(path), lineno, f"unknown key {key!r}")
        for t in targets:
            if not t.entries:
                raise ManifestError(str(path), t.line, f"target {t.name!r} has no entry")
        return cls(targets)


REPORT_FIELDS = frozenset(
    """loc files ct st el mg at ag all_global wildcards aet aet_elements aet_types sg
    sg_heads td size_category_loc size_category_ct cxsd cxsd_constant cxsd_recursion_coeff
    recursion_weight cxsd_value dpr dpf srr v_s v_rm_gs v_rm_gsh unsatisfiable_positions
    partial""".split()
)


def values_match(expected: str, actual: str) -> bool:
    tolerance = Decimal(0)
    if "+-" in expected:
        expected, _, tol = expected.partition("+-")
        try:
            tolerance = Decimal(tol.strip())
        except InvalidOperation:
            return False
    expected = expected.strip()
    try:
        return abs(Decimal(expected) - Decimal(actual)) <= tolerance
    except InvalidOperation:
        return " ".join(expected.split()) == " ".join(actual.split())


@dataclass
class TargetResult:
    name: str
    status: str  # PASS | FAIL | SKIP | ERROR
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)
    report: Optional[MetricReport] = None
    message: str = ""


def run_target(target: Target) -> TargetResult:
    if not all(os.path.isfile(e) for e in target.entries):
        return TargetResult(target.name, "SKIP", message="schema tree not present")
    try:
        catalog = ResolutionCatalog.from_file(target.catalog) if target.catalog else None
        report = analyze(target.entries, target.main, catalog)
    except (SchemaError, OSError) as exc:
        return TargetResult(target.name, "ERROR", message=str(exc))
    actual = dict(report.flat_fields())
    mismatches = [
        (k, v, actual.get(k, "<absent>"))
        for k, v in sorted(target.expected.items())
        if k not in actual or not values_match(v, actual[k])
    ]
    return TargetResult(target.name, "FAIL" if mismatches else "PASS", mismatches, report)


def run_corpus(manifest: CorpusManifest) -> list[TargetResult]:
    return [run_target(t) for t in manifest.targets]


def corpus_text(results: Sequence[TargetResult], include_reports: bool = True) -> str:
    lines = []
    for r in results:
        lines.append(f"[{r.status}] {r.name}" + (f": {r.message}" if r.message else ""))
        for fname, expected, actual in r.mismatches:
            lines.append(f"    {fname}: expected {expected}, actual {actual}")
        if include_reports and r.report is not None:
            lines.extend("    " + k.ljust(24) + v for k, v in r.report.flat_fields())
    if results:
        lines.append("")
    lines.append(
        "targets={} pass={} fail={} skip={} error={}".format(
            len(results),
            *(sum(1 for r in results if r.status == s) for s in ("PASS", "FAIL", "SKIP", "ERROR")),
        )
    )
    return "\n".join(lines) + "\n"
