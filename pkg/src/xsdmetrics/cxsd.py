"""Structure-weighted complexity C(XSD) with a symbolic recursion weight R.

Weight rules (centralised in :func:`_member_weight` and :func:`_own_weight`):

* simple types, attributes and wildcards weigh 1;
* an element weighs what its declared type weighs;
* model groups and attribute groups weigh the sum of their members;
* a complex type weighs its base (1 for the implicit ``anyType``) plus its
  own members for extension, or minus the base members it drops for
  restriction, plus ``R`` for every recursive child position it declares;
* occurrence bounds are ignored, and every weight is floored so that
  ``eval(1) >= 1``.

A child position is recursive when the component it expands to can reach
the position's owner again in the expansion graph, i.e. both lie in one
strongly connected component. This makes each weight independent of the
order in which components are evaluated.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .model import (
    AttributeUse,
    AttributeUseKind,
    CircularDefinition,
    ComplexTypePayload,
    Derivation,
    Kind,
    ModelGroupPayload,
    Particle,
    ParticleKind,
    SchemaComponent,
    SchemaSet,
)


@dataclass(frozen=True, order=True)
class Weight:
    """The polynomial ``constant + recursion_coeff * R``."""

    constant: int = 0
    recursion_coeff: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.constant + other.constant, self.recursion_coeff + other.recursion_coeff)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.constant - other.constant, self.recursion_coeff - other.recursion_coeff)

    def __str__(self) -> str:
        if self.recursion_coeff == 0:
            return str(self.constant)
        return f"{self.constant} + {self.recursion_coeff}R"

    def eval(self, r: int) -> int:
        if r < 1:
            raise ValueError("the recursion weight R must be >= 1")
        return self.constant + self.recursion_coeff * r

    def floored(self) -> "Weight":
        b = max(self.recursion_coeff, 0)
        a = max(self.constant, 1 - b)
        return Weight(a, b)


ONE = Weight(1)
R = Weight(0, 1)


def expansion_edges(schema_set: SchemaSet, c: SchemaComponent) -> Iterator[int]:
    """Components whose weight (or recursion) ``c``'s expansion depends on."""
    s = c.structure
    if c.kind.is_type and s.base_type is not None:
        yield s.base_type
    if c.kind is Kind.SIMPLE_TYPE:
        yield from s.used_types
    if c.kind in (Kind.ELEMENT, Kind.ATTRIBUTE) and s.declared_type is not None:
        yield s.declared_type
    for p in getattr(s, "particles", ()):
        target = _particle_target(p)
        if target is not None:
            yield target
    for a in getattr(s, "attribute_uses", ()):
        target = _attribute_target(a)
        if target is not None:
            yield target


def _particle_target(p: Particle) -> Optional[int]:
    if p.kind is ParticleKind.ELEMENT_DECLARATION:
        return p.declared_type
    if p.kind in (ParticleKind.ELEMENT_REFERENCE, ParticleKind.GROUP_REFERENCE):
        return p.target
    return None


def _attribute_target(a: AttributeUse) -> Optional[int]:
    if a.kind is AttributeUseKind.DECLARATION:
        return a.declared_type
    if a.kind in (AttributeUseKind.REFERENCE, AttributeUseKind.GROUP_REFERENCE):
        return a.target
    return None


def strongly_connected(nodes: Iterable[int], succ) -> dict[int, int]:
    """Tarjan's algorithm, iterative. Returns node -> component number."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    comp: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                label = len(set(comp.values()))
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp[member] = label
                    if member == node:
                        break
    return comp


@dataclass(frozen=True)
class RecursionInfo:
    """Recursive child positions as ``(owner id, particle index)`` pairs."""

    flagged: frozenset[tuple[int, int]] = frozenset()

    def nrc(self, owner: int) -> int:
        return sum(1 for o, _ in self.flagged if o == owner)

    def is_recursive(self, owner: int, index: int) -> bool:
        return (owner, index) in self.flagged

    @property
    def total(self) -> int:
        return len(self.flagged)


def detect_recursion(schema_set: SchemaSet) -> RecursionInfo:
    def succ(cid: int) -> list[int]:
        return [t for t in expansion_edges(schema_set, schema_set.component(cid)) if t >= 0]

    comp = strongly_connected((c.id for c in schema_set.components), succ)
    flagged = set()
    for c in schema_set.components:
        for i, p in enumerate(getattr(c.structure, "particles", ())):
            if not p.is_element:
                continue
            target = _particle_target(p)
            if target is not None and target >= 0 and comp[target] == comp[c.id]:
                flagged.add((c.id, i))
    return RecursionInfo(frozenset(flagged))


@dataclass
class WeightCache:
    """Memo table for component weights of one schema set.

    Evaluation holds ``lock`` so concurrent callers observe the same results
    as a sequential evaluation.
    """

    schema_set: SchemaSet
    recursion: Optional[RecursionInfo] = None
    weights: dict[int, Weight] = field(default_factory=dict)
    lock: threading.RLock = field(default_factory=threading.RLock)

    def __post_init__(self):
        if self.recursion is None:
            self.recursion = detect_recursion(self.schema_set)


def _member_weight(cache: WeightCache, owner: int, index: int, p: Particle) -> Weight:
    if p.kind is ParticleKind.WILDCARD:
        return ONE
    if cache.recursion.is_recursive(owner, index):
        return R
    target = _particle_target(p)
    return ONE if target is None else cache.weights[target]


def _attribute_weight(cache: WeightCache, a: AttributeUse) -> Weight:
    if a.kind is AttributeUseKind.GROUP_REFERENCE and a.target is not None:
        return cache.weights[a.target]
    return ONE


def _members(cache: WeightCache, c: SchemaComponent) -> list[tuple[tuple, Weight, bool]]:
    """Own members of ``c`` as ``(key, weight, recursive)`` triples."""
    s = c.structure
    out = []
    for i, p in enumerate(getattr(s, "particles", ())):
        out.append((p.key, _member_weight(cache, c.id, i, p), cache.recursion.is_recursive(c.id, i)))
    for a in getattr(s, "attribute_uses", ()):
        if not a.prohibited:
            out.append((a.key, _attribute_weight(cache, a), False))
    return out


def _effective_members(cache: WeightCache, cid: Optional[int]) -> list[tuple[tuple, Weight, bool]]:
    """Members a type carries including those inherited by extension."""
    if cid is None or cid < 0:
        return []
    c = cache.schema_set.component(cid)
    if c.kind is not Kind.COMPLEX_TYPE:
        return []
    own = _members(cache, c)
    if c.structure.derivation is Derivation.EXTENSION:
        return _effective_members(cache, c.structure.base_type) + own
    return own


def _own_weight(cache: WeightCache, c: SchemaComponent) -> Weight:
    s = c.structure
    if c.kind is Kind.COMPLEX_TYPE and not c.builtin:
        if s.derivation is Derivation.NONE or s.base_type is None:
            base = ONE
        else:
            base = cache.weights[s.base_type]
        own = _members(cache, c)
        if s.derivation is Derivation.RESTRICTION:
            inherited = _effective_members(cache, s.base_type)
            kept = {key for key, _, _ in own}
            base_keys = {key for key, _, _ in inherited}
            removed = sum((w for key, w, _ in inherited if key not in kept), Weight())
            prohibited = sum(
                1 for a in s.attribute_uses if a.prohibited and a.key not in base_keys
            )
            new_recursive = sum(1 for key, _, rec in own if rec and key not in base_keys)
            total = base - removed - Weight(prohibited) + Weight(0, new_recursive)
        else:
            total = base + sum((w for _, w, _ in own), Weight())
        return total.floored()
    if c.kind is Kind.ELEMENT:
        t = s.declared_type
        return ONE if t is None else cache.weights[t]
    if c.kind in (Kind.MODEL_GROUP, Kind.ATTRIBUTE_GROUP):
        return sum((w for _, w, _ in _members(cache, c)), Weight()).floored()
    return ONE


def _dependencies(cache: WeightCache, c: SchemaComponent) -> list[int]:
    """Components whose memoised weight ``c`` needs (recursive positions excluded)."""
    s = c.structure
    deps: list[int] = []
    if c.kind is Kind.COMPLEX_TYPE and s.derivation is not Derivation.NONE and s.base_type is not None:
        deps.append(s.base_type)
    if c.kind is Kind.ELEMENT and s.declared_type is not None:
        deps.append(s.declared_type)
    if c.kind in (Kind.COMPLEX_TYPE, Kind.MODEL_GROUP):
        for i, p in enumerate(s.particles):
            target = _particle_target(p)
            if target is not None and not cache.recursion.is_recursive(c.id, i):
                deps.append(target)
    if c.kind in (Kind.COMPLEX_TYPE, Kind.ATTRIBUTE_GROUP):
        for a in s.attribute_uses:
            if a.kind is AttributeUseKind.GROUP_REFERENCE and a.target is not None:
                deps.append(a.target)
    return deps


def component_weight(
    schema_set: SchemaSet, c: SchemaComponent, memo: Optional[WeightCache] = None
) -> Weight:
    """Weight of ``c``; every weight computed along the way is kept in ``memo``."""
    cache = memo if memo is not None else WeightCache(schema_set)
    with cache.lock:
        if c.id in cache.weights:
            return cache.weights[c.id]
        schema_set.derivation_order  # raises DerivationCycle
        in_progress: set[int] = set()
        work = [(c.id, False)]
        while work:
            cid, expanded = work.pop()
            if cid in cache.weights:
                continue
            comp = schema_set.component(cid)
            if expanded:
                in_progress.discard(cid)
                cache.weights[cid] = _own_weight(cache, comp)
                continue
            if cid in in_progress:
                raise CircularDefinition(f"{comp.label()} at {comp.location} contains itself")
            in_progress.add(cid)
            work.append((cid, True))
            for dep in _dependencies(cache, comp):
                if dep not in cache.weights:
                    if dep in in_progress:
                        d = schema_set.component(dep)
                        raise CircularDefinition(f"{d.label()} at {d.location} contains itself")
                    work.append((dep, False))
        return cache.weights[c.id]


def referenced_globals(schema_set: SchemaSet) -> frozenset[int]:
    """Global components used by some other global component's declaration."""
    from .subtyping import explicit_uses

    used: set[int] = set()
    for c in schema_set.globals():
        used.update(t for t in explicit_uses(schema_set, c) if t != c.id)
    return frozenset(used)


def compute_cxsd(schema_set: SchemaSet, memo: Optional[WeightCache] = None) -> Weight:
    """Sum of global element and attribute weights plus unreferenced
    global groups, attribute groups and types."""
    cache = memo if memo is not None else WeightCache(schema_set)
    referenced = referenced_globals(schema_set)
    total = Weight()
    for c in schema_set.globals():
        if c.kind in (Kind.ELEMENT, Kind.ATTRIBUTE) or c.id not in referenced:
            total = total + component_weight(schema_set, c, cache)
    return total
