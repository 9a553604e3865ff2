"""Polymorphism metrics and component dependency graphs.

``build_graph`` produces the explicit dependency graph over global
components, optionally extended with the hidden edges that substitution
groups and type derivation introduce. DPR, DPF and SRR are computed over
element positions of complex types and over these graphs.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .model import (
    Kind,
    Particle,
    ParticleKind,
    SchemaComponent,
    SchemaError,
    SchemaSet,
    derived_type_closure,
    substitution_closure,
)

EXPLICIT = "explicit"
HIDDEN_SUBSTITUTION = "hidden_substitution"
HIDDEN_DERIVATION = "hidden_derivation"


class EmptyUniverse(SchemaError):
    pass


@dataclass(frozen=True)
class Ratio:
    """``numerator / denominator`` with a fixed value for an empty denominator."""

    numerator: int
    denominator: int
    empty_value: int = 0

    @property
    def fraction(self) -> Fraction:
        if self.denominator == 0:
            return Fraction(self.empty_value)
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return float(self.fraction)

    def rounded(self, places: int = 2) -> str:
        f = self.fraction
        exact = Decimal(f.numerator) / Decimal(f.denominator)
        return str(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


# -- graphs ------------------------------------------------------------------


def _declaration_parts(schema_set: SchemaSet, c: SchemaComponent) -> Iterator[SchemaComponent]:
    """``c`` followed by the anonymous types nested in its declaration."""
    stack, seen = [c], {c.id}
    while stack:
        part = stack.pop()
        yield part
        for t in _direct_uses(part):
            if t is not None and t >= 0 and t not in seen:
                inner = schema_set.component(t)
                if not inner.is_global:
                    seen.add(t)
                    stack.append(inner)


def _direct_uses(c: SchemaComponent) -> Iterator[Optional[int]]:
    s = c.structure
    if c.kind.is_type:
        yield s.base_type
    if c.kind is Kind.SIMPLE_TYPE:
        yield from s.used_types
    if c.kind in (Kind.ELEMENT, Kind.ATTRIBUTE):
        yield s.declared_type
    if c.kind is Kind.ELEMENT:
        yield s.substitution_head
    for p in getattr(s, "particles", ()):
        yield p.target if p.kind is not ParticleKind.ELEMENT_DECLARATION else p.declared_type
    for a in getattr(s, "attribute_uses", ()):
        yield a.target if a.target is not None else a.declared_type


def explicit_uses(schema_set: SchemaSet, c: SchemaComponent) -> set[int]:
    """Global user components used anywhere in the declaration of ``c``."""
    used = set()
    for part in _declaration_parts(schema_set, c):
        for t in _direct_uses(part):
            if t is not None and t >= 0 and schema_set.component(t).is_global:
                used.add(t)
    return used


def _element_position_types(schema_set: SchemaSet, c: SchemaComponent) -> Iterator[int]:
    """Declared types of element positions in ``c``'s own declaration."""
    for part in _declaration_parts(schema_set, c):
        if part.kind is Kind.ELEMENT and part.structure.declared_type is not None:
            yield part.structure.declared_type
        for p in getattr(part.structure, "particles", ()):
            if p.kind is ParticleKind.ELEMENT_DECLARATION and p.declared_type is not None:
                yield p.declared_type


def _hidden_uses(schema_set: SchemaSet, c: SchemaComponent) -> Iterator[tuple[int, str]]:
    for part in _declaration_parts(schema_set, c):
        for p in getattr(part.structure, "particles", ()):
            if p.kind is ParticleKind.ELEMENT_REFERENCE and p.target is not None:
                for member in substitution_closure(schema_set, p.target):
                    yield member, HIDDEN_SUBSTITUTION
    for t in set(_element_position_types(schema_set, c)):
        if t < 0:
            continue
        for d in derived_type_closure(schema_set, t):
            if schema_set.component(d).is_global:
                yield d, HIDDEN_DERIVATION


@dataclass(frozen=True)
class DependencyGraph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int, str]]
    main_vertices: frozenset[int]

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, set[int]] = {v: set() for v in self.vertices}
        for i, j, _ in self.edges:
            out[i].add(j)
        return {v: tuple(sorted(s)) for v, s in out.items()}

    def edges_of_kind(self, *kinds: str) -> frozenset[tuple[int, int, str]]:
        return frozenset(e for e in self.edges if e[2] in kinds)


def build_graph(schema_set: SchemaSet, hidden: bool = False) -> DependencyGraph:
    vertices = frozenset(c.id for c in schema_set.globals())
    main = frozenset(c.id for c in schema_set.globals() if schema_set.is_main(c))
    edges = set()
    for c in schema_set.globals():
        for t in explicit_uses(schema_set, c):
            edges.add((c.id, t, EXPLICIT))
        if hidden:
            for t, kind in _hidden_uses(schema_set, c):
                edges.add((c.id, t, kind))
    return DependencyGraph(vertices, frozenset(edges), main)


def reachable_from(graph: DependencyGraph, seeds: Iterable[int]) -> frozenset[int]:
    """Seeds plus every vertex reachable from them along directed edges."""
    seen = set(seeds)
    work = list(seen)
    while work:
        v = work.pop()
        for w in graph.successors.get(v, ()):
            if w not in seen:
                seen.add(w)
                work.append(w)
    return frozenset(seen)


# -- polymorphism -------------------------------------------------------------


@dataclass(frozen=True)
class Position:
    """An element position of a complex type and its dynamic alternatives."""

    owner: int  # type or model group declaring the particle
    particle: Particle
    substitutes: tuple[int, ...] = ()
    dynamic_types: tuple[int, ...] = ()
    unsatisfiable: bool = False

    @property
    def alternatives(self) -> int:
        return len(self.substitutes) + len(self.dynamic_types)

    @property
    def polymorphic(self) -> bool:
        return self.alternatives > 0


@dataclass(frozen=True)
class PolymorphismCounts:
    type_id: int
    e_ct: int
    pe_ct: int
    oe_ct: int
    unsatisfiable: int = 0


def _element_particles(schema_set: SchemaSet, c: SchemaComponent) -> Iterator[tuple[int, Particle]]:
    """Own element particles plus those of directly referenced model groups."""
    for p in c.structure.particles:
        if p.is_element:
            yield c.id, p
        elif p.kind is ParticleKind.GROUP_REFERENCE and p.target is not None:
            group = schema_set.component(p.target)
            for q in group.structure.particles:
                if q.is_element:
                    yield group.id, q


def _concrete_named_subtypes(schema_set: SchemaSet, t: Optional[int]) -> tuple[int, ...]:
    if t is None or t < 0:
        return ()
    return tuple(sorted(
        d for d in derived_type_closure(schema_set, t)
        if schema_set.component(d).is_global and not schema_set.component(d).is_abstract
    ))


def positions(schema_set: SchemaSet, c: SchemaComponent) -> list[Position]:
    out = []
    for owner, p in _element_particles(schema_set, c):
        substitutes: tuple[int, ...] = ()
        element_abstract = False
        if p.kind is ParticleKind.ELEMENT_REFERENCE:
            if p.target is None:
                out.append(Position(owner, p))
                continue
            element_abstract = schema_set.component(p.target).is_abstract
            substitutes = tuple(sorted(
                m for m in substitution_closure(schema_set, p.target)
                if not schema_set.component(m).is_abstract
            ))
        t = p.declared_type
        dynamic = _concrete_named_subtypes(schema_set, t)
        type_abstract = t is not None and schema_set.component(t).is_abstract
        unsatisfiable = (element_abstract and not substitutes) or (
            type_abstract and not dynamic and not substitutes
        )
        out.append(Position(owner, p, substitutes, dynamic, unsatisfiable))
    return out


def polymorphism_table(schema_set: SchemaSet) -> list[PolymorphismCounts]:
    rows = []
    for c in schema_set.of_kind(Kind.COMPLEX_TYPE):
        ps = positions(schema_set, c)
        rows.append(PolymorphismCounts(
            type_id=c.id,
            e_ct=len(ps),
            pe_ct=sum(1 for p in ps if p.polymorphic),
            oe_ct=len(ps) + sum(p.alternatives for p in ps),
            unsatisfiable=sum(1 for p in ps if p.unsatisfiable),
        ))
    return rows


def compute_dpr(schema_set: SchemaSet, table: Optional[list[PolymorphismCounts]] = None) -> Ratio:
    table = polymorphism_table(schema_set) if table is None else table
    return Ratio(sum(r.pe_ct for r in table), sum(r.e_ct for r in table), empty_value=0)


def compute_dpf(schema_set: SchemaSet, table: Optional[list[PolymorphismCounts]] = None) -> Ratio:
    table = polymorphism_table(schema_set) if table is None else table
    return Ratio(sum(r.oe_ct for r in table), sum(r.e_ct for r in table), empty_value=1)


@dataclass(frozen=True)
class Reachability:
    v_s: int
    v_rm_gs: frozenset[int]
    v_rm_gsh: frozenset[int]

    @property
    def srr(self) -> Ratio:
        return Ratio(len(self.v_rm_gsh) - len(self.v_rm_gs), self.v_s)


def reachability(schema_set: SchemaSet) -> Reachability:
    gs = build_graph(schema_set, hidden=False)
    gsh = build_graph(schema_set, hidden=True)
    return Reachability(
        v_s=len(gs.vertices),
        v_rm_gs=reachable_from(gs, gs.main_vertices),
        v_rm_gsh=reachable_from(gsh, gsh.main_vertices),
    )


def compute_srr(schema_set: SchemaSet) -> Ratio:
    r = reachability(schema_set)
    if r.v_s == 0:
        raise EmptyUniverse("no global components: SRR is undefined")
    return r.srr
