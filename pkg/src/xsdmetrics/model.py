"""In-memory schema-component model.

A :class:`SchemaSet` is the resolved universe of loaded schema documents and
their components. Components reference each other by integer id; built-in
XSD types live in a reserved registry with negative ids so every declared
type resolves to something.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Union

XSD_NAMESPACE = "http://www.w3.org/2001/XMLSchema"


class SchemaError(Exception):
    """Base class for model and loading errors."""


class UnresolvedReference(SchemaError):
    def __init__(self, kind: "Kind", name: "QualifiedName"):
        super().__init__(f"unresolved {kind.value} reference {name}")
        self.kind = kind
        self.name = name


class DuplicateDefinition(SchemaError):
    def __init__(self, kind: "Kind", name: "QualifiedName", first: str, second: str):
        super().__init__(
            f"duplicate {kind.value} {name}: defined at {first} and at {second}"
        )
        self.kind = kind
        self.name = name
        self.locations = (first, second)


class DerivationCycle(SchemaError):
    def __init__(self, names: Iterable[str]):
        names = list(names)
        super().__init__("type derivation cycle through " + " -> ".join(names))
        self.names = names


class CircularDefinition(SchemaError):
    """A model group or attribute group (transitively) contains itself."""


@dataclass(frozen=True, order=True)
class QualifiedName:
    namespace_uri: str
    local_name: str

    def __post_init__(self):
        if not self.local_name:
            raise ValueError("local_name must be non-empty")

    def __str__(self) -> str:
        if self.namespace_uri:
            return "{%s}%s" % (self.namespace_uri, self.local_name)
        return self.local_name


class Kind(enum.Enum):
    COMPLEX_TYPE = "ComplexType"
    SIMPLE_TYPE = "SimpleType"
    ELEMENT = "Element"
    ATTRIBUTE = "Attribute"
    MODEL_GROUP = "ModelGroup"
    ATTRIBUTE_GROUP = "AttributeGroup"

    @property
    def symbol_space(self) -> str:
        # complex and simple types share one symbol space in XSD
        if self in (Kind.COMPLEX_TYPE, Kind.SIMPLE_TYPE):
            return "type"
        return self.value

    @property
    def is_type(self) -> bool:
        return self in (Kind.COMPLEX_TYPE, Kind.SIMPLE_TYPE)


class Derivation(enum.Enum):
    NONE = "none"
    EXTENSION = "extension"
    RESTRICTION = "restriction"


class ParticleKind(enum.Enum):
    ELEMENT_DECLARATION = "element-declaration"
    ELEMENT_REFERENCE = "element-reference"
    GROUP_REFERENCE = "group-reference"
    WILDCARD = "wildcard"


class AttributeUseKind(enum.Enum):
    DECLARATION = "attribute-declaration"
    REFERENCE = "attribute-reference"
    GROUP_REFERENCE = "attribute-group-reference"
    WILDCARD = "any-attribute"


#: ``max_occurs`` value for ``maxOccurs="unbounded"``.
UNBOUNDED = None

@dataclass(frozen=True)
class Particle:
    """One position in a content model.

    ``name`` is the element name for declarations and the referenced name for
    references. ``target`` is the id of the referenced global element or
    model group; ``declared_type`` is the element's type id. Either is None
    when the reference could not be resolved.
    """

    kind: ParticleKind
    name: Optional[QualifiedName] = None
    target: Optional[int] = None
    declared_type: Optional[int] = None
    type_name: Optional[QualifiedName] = None
    min_occurs: int = 1
    max_occurs: Optional[int] = 1
    compositor_path: tuple[str, ...] = ()
    line: int = 0

    @property
    def is_element(self) -> bool:
        return self.kind in (ParticleKind.ELEMENT_DECLARATION, ParticleKind.ELEMENT_REFERENCE)

    @property
    def key(self) -> tuple[str, Optional[QualifiedName]]:
        """Identity of the position used to match restated members under restriction."""
        return (self.kind.value, self.name)


@dataclass(frozen=True)
class AttributeUse:
    kind: AttributeUseKind
    name: Optional[QualifiedName] = None
    target: Optional[int] = None
    declared_type: Optional[int] = None
    type_name: Optional[QualifiedName] = None
    prohibited: bool = False
    line: int = 0

    @property
    def key(self) -> tuple[str, Optional[QualifiedName]]:
        return (self.kind.value, self.name)


@dataclass(frozen=True)
class ComplexTypePayload:
    derivation: Derivation = Derivation.NONE
    base_type: Optional[int] = None
    base_name: Optional[QualifiedName] = None
    simple_content: bool = False
    particles: tuple[Particle, ...] = ()
    attribute_uses: tuple[AttributeUse, ...] = ()

    @property
    def element_count(self) -> int:
        """Element positions declared by this type itself (group refs not expanded)."""
        return sum(1 for p in self.particles if p.is_element)


@dataclass(frozen=True)
class SimpleTypePayload:
    variety: str = "atomic"  # atomic | list | union
    base_type: Optional[int] = None
    base_name: Optional[QualifiedName] = None
    # itemType / memberTypes / inline types, in document order
    used_types: tuple[int, ...] = ()


@dataclass(frozen=True)
class ElementPayload:
    declared_type: Optional[int] = None
    type_name: Optional[QualifiedName] = None
    substitution_head: Optional[int] = None
    head_name: Optional[QualifiedName] = None
    is_abstract: bool = False


@dataclass(frozen=True)
class AttributePayload:
    declared_type: Optional[int] = None
    type_name: Optional[QualifiedName] = None


@dataclass(frozen=True)
class ModelGroupPayload:
    compositor: str = "sequence"
    particles: tuple[Particle, ...] = ()


@dataclass(frozen=True)
class AttributeGroupPayload:
    attribute_uses: tuple[AttributeUse, ...] = ()


Payload = Union[
    ComplexTypePayload,
    SimpleTypePayload,
    ElementPayload,
    AttributePayload,
    ModelGroupPayload,
    AttributeGroupPayload,
]


@dataclass(frozen=True)
class SchemaDocument:
    source_location: str
    target_namespace: str
    line_count: int
    includes: tuple[str, ...] = ()
    imports: tuple[tuple[str, Optional[str]], ...] = ()
    is_main: bool = False


@dataclass(frozen=True)
class SchemaComponent:
    id: int
    kind: Kind
    name: Optional[QualifiedName]
    is_global: bool
    is_abstract: bool
    owner_document: Optional[str]
    structure: Payload
    line: int = 0
    # id of the global component whose declaration contains this one
    context: Optional[int] = None
    builtin: bool = False

    def __post_init__(self):
        if self.is_global and self.name is None:
            raise ValueError("global components must be named")
        if self.name is None and not self.kind.is_type:
            raise ValueError("only types may be anonymous")

    @property
    def location(self) -> str:
        return f"{self.owner_document or '<builtin>'}:{self.line}"

    def label(self) -> str:
        if self.name is not None:
            return self.name.local_name
        return f"anonymous{self.kind.value}@{self.line}"


@dataclass(frozen=True)
class MissingReference:
    """A QName reference that did not resolve against the loaded set."""

    kind: Kind
    name: QualifiedName
    referrer: str


_BUILTIN_SIMPLE = (
    "anySimpleType string normalizedString token language Name NCName ID IDREF "
    "IDREFS ENTITY ENTITIES NMTOKEN NMTOKENS boolean base64Binary hexBinary float "
    "decimal integer nonPositiveInteger negativeInteger long int short byte "
    "nonNegativeInteger unsignedLong unsignedInt unsignedShort unsignedByte "
    "positiveInteger double anyURI QName NOTATION duration dateTime date time "
    "gYearMonth gYear gMonthDay gDay gMonth"
).split()


def _make_builtins() -> dict[int, SchemaComponent]:
    out = {}
    any_type = SchemaComponent(
        id=-1,
        kind=Kind.COMPLEX_TYPE,
        name=QualifiedName(XSD_NAMESPACE, "anyType"),
        is_global=True,
        is_abstract=False,
        owner_document=None,
        structure=ComplexTypePayload(),
        builtin=True,
    )
    out[-1] = any_type
    for i, local in enumerate(_BUILTIN_SIMPLE, start=2):
        out[-i] = SchemaComponent(
            id=-i,
            kind=Kind.SIMPLE_TYPE,
            name=QualifiedName(XSD_NAMESPACE, local),
            is_global=True,
            is_abstract=False,
            owner_document=None,
            structure=SimpleTypePayload(),
            builtin=True,
        )
    return out


BUILTINS: Mapping[int, SchemaComponent] = MappingProxyType(_make_builtins())
ANY_TYPE_ID = -1
_BUILTIN_INDEX = {("type", c.name): c.id for c in BUILTINS.values()}


@dataclass(frozen=True)
class SchemaSet:
    """Loaded, linked and immutable set of schema documents and components.

    ``components`` holds the user-defined components indexed by id; built-in
    types are reachable through :meth:`component` and :meth:`lookup` only.
    """

    documents: tuple[SchemaDocument, ...] = ()
    components: tuple[SchemaComponent, ...] = ()
    missing_references: tuple[MissingReference, ...] = ()
    index: Mapping[tuple[str, QualifiedName], int] = field(
        default_factory=lambda: MappingProxyType({})
    )

    def component(self, cid: int) -> SchemaComponent:
        if cid < 0:
            return BUILTINS[cid]
        return self.components[cid]

    def lookup(self, kind: Kind, name: QualifiedName) -> Optional[SchemaComponent]:
        cid = self.index.get((kind.symbol_space, name))
        if cid is None:
            cid = _BUILTIN_INDEX.get((kind.symbol_space, name))
        return None if cid is None else self.component(cid)

    def document(self, location: str) -> SchemaDocument:
        return self._documents_by_location[location]

    @cached_property
    def _documents_by_location(self) -> dict[str, SchemaDocument]:
        return {d.source_location: d for d in self.documents}

    def globals(self, kind: Optional[Kind] = None) -> Iterator[SchemaComponent]:
        for c in self.components:
            if c.is_global and (kind is None or c.kind is kind):
                yield c

    def of_kind(self, kind: Kind) -> Iterator[SchemaComponent]:
        return (c for c in self.components if c.kind is kind)

    def is_main(self, c: SchemaComponent) -> bool:
        return c.owner_document is not None and self.document(c.owner_document).is_main

    @cached_property
    def direct_substitutes(self) -> Mapping[int, tuple[int, ...]]:
        members: dict[int, list[int]] = {}
        for c in self.of_kind(Kind.ELEMENT):
            head = c.structure.substitution_head
            if head is not None:
                members.setdefault(head, []).append(c.id)
        return MappingProxyType({k: tuple(v) for k, v in members.items()})

    @cached_property
    def direct_subtypes(self) -> Mapping[int, tuple[int, ...]]:
        derived: dict[int, list[int]] = {}
        for c in self.components:
            if c.kind.is_type and c.structure.base_type is not None:
                if c.kind is Kind.COMPLEX_TYPE and c.structure.derivation is Derivation.NONE:
                    continue
                derived.setdefault(c.structure.base_type, []).append(c.id)
        return MappingProxyType({k: tuple(v) for k, v in derived.items()})

    @cached_property
    def derivation_order(self) -> tuple[int, ...]:
        """User type ids ordered base-first; raises DerivationCycle."""
        done: set[int] = set()
        order: list[int] = []
        for c in self.components:
            if not c.kind.is_type:
                continue
            chain: list[int] = []
            cid: Optional[int] = c.id
            while cid is not None and cid >= 0 and cid not in done:
                if cid in chain:
                    cycle = chain[chain.index(cid):] + [cid]
                    raise DerivationCycle(self.component(i).label() for i in cycle)
                chain.append(cid)
                cid = self.component(cid).structure.base_type
            for cid in reversed(chain):
                done.add(cid)
                order.append(cid)
        return tuple(order)


def resolve_reference(schema_set: SchemaSet, kind: Kind, name: QualifiedName) -> SchemaComponent:
    """Return the global component of ``kind`` named ``name``.

    Duplicates are rejected while the set is built, so a hit is unique.
    """
    found = schema_set.lookup(kind, name)
    if found is None or found.kind is not kind:
        raise UnresolvedReference(kind, name)
    return found


def substitution_closure(schema_set: SchemaSet, head: int) -> frozenset[int]:
    """Ids of global elements whose substitution-head chain reaches ``head``."""
    seen: set[int] = set()
    work = list(schema_set.direct_substitutes.get(head, ()))
    while work:
        cid = work.pop()
        if cid in seen or cid == head:
            continue
        seen.add(cid)
        work.extend(schema_set.direct_substitutes.get(cid, ()))
    return frozenset(seen)


def derived_type_closure(schema_set: SchemaSet, base: int) -> frozenset[int]:
    """Ids of all types derived (transitively) from ``base``, excluding ``base``."""
    schema_set.derivation_order  # cycle check
    seen: set[int] = set()
    work = list(schema_set.direct_subtypes.get(base, ()))
    while work:
        cid = work.pop()
        if cid in seen:
            continue
        seen.add(cid)
        work.extend(schema_set.direct_subtypes.get(cid, ()))
    return frozenset(seen)
