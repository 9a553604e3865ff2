"""Offline loading of schema document sets.

Documents are parsed with lxml, include/import/redefine references are
followed through a :class:`ResolutionCatalog`, and the components of every
document are linked into one immutable :class:`~xsdmetrics.model.SchemaSet`.

Catalog file grammar (one directive per line, ``#`` at line start or after
whitespace begins a comment)::

    LOCATION  <schemaLocation-uri>  <path>
    NAMESPACE <namespace-uri>       <path>
    BASE      <directory>

Relative paths are resolved against the catalog file's directory. The path
is the remainder of the line after the URI, so it may contain spaces.
"""
from __future__ import annotations

import fnmatch
import hashlib
import logging
import os
from collections import deque
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Optional, Sequence, Union
from urllib.parse import urlparse, unquote

from lxml import etree

from .model import (
    ANY_TYPE_ID,
    AttributeGroupPayload,
    AttributePayload,
    AttributeUse,
    AttributeUseKind,
    ComplexTypePayload,
    Derivation,
    DuplicateDefinition,
    ElementPayload,
    Kind,
    MissingReference,
    ModelGroupPayload,
    Particle,
    ParticleKind,
    QualifiedName,
    SchemaComponent,
    SchemaDocument,
    SchemaError,
    SchemaSet,
    SimpleTypePayload,
    UnresolvedReference,
    XSD_NAMESPACE,
)

log = logging.getLogger(__name__)

XS = "{%s}" % XSD_NAMESPACE
_COMPOSITORS = ("sequence", "choice", "all")

PathLike = Union[str, os.PathLike]


class ParseError(SchemaError):
    def __init__(self, location: str, message: str, line: int = 0):
        where = f"{location}:{line}" if line else location
        super().__init__(f"{where}: {message}")
        self.location = location
        self.line = line


class UnresolvedLocation(SchemaError):
    def __init__(self, referrer: str, location: str):
        super().__init__(f"{referrer}: cannot resolve schema location {location!r}")
        self.referrer = referrer
        self.location = location


class CatalogError(SchemaError):
    pass


@dataclass(frozen=True)
class ResolutionCatalog:
    location_map: dict[str, str] = field(default_factory=dict)
    namespace_map: dict[str, str] = field(default_factory=dict)
    base_dirs: tuple[str, ...] = ()
    digest: str = "none"

    @classmethod
    def from_file(cls, path: PathLike) -> "ResolutionCatalog":
        path = Path(path)
        data = path.read_bytes()
        root = path.resolve().parent
        locations: dict[str, str] = {}
        namespaces: dict[str, str] = {}
        bases: list[str] = []
        for lineno, raw in enumerate(data.decode("utf-8").splitlines(), start=1):
            line = _strip_comment(raw).strip()
            if not line:
                continue
            parts = line.split(None, 2)
            directive = parts[0].upper()
            if directive == "BASE" and len(parts) >= 2:
                bases.append(str(root / line.split(None, 1)[1].strip()))
            elif directive in ("LOCATION", "NAMESPACE") and len(parts) == 3:
                target = str(root / parts[2].strip())
                (locations if directive == "LOCATION" else namespaces)[parts[1]] = target
            else:
                raise CatalogError(f"{path}:{lineno}: malformed catalog line {raw!r}")
        return cls(locations, namespaces, tuple(bases), hashlib.sha256(data).hexdigest())

    def resolve(
        self, location: Optional[str], namespace: Optional[str], referrer_dir: Optional[Path]
    ) -> Optional[Path]:
        candidates: list[Path] = []
        if location:
            if location in self.location_map:
                candidates.append(Path(self.location_map[location]))
            url = urlparse(location)
            remote = url.scheme in ("http", "https", "ftp")
            if url.scheme == "file":
                candidates.append(Path(unquote(url.path)))
            elif not remote:
                if referrer_dir is not None:
                    candidates.append(referrer_dir / location)
                candidates.extend(Path(b) / location for b in self.base_dirs)
            else:
                tail = unquote(url.path).lstrip("/")
                for b in self.base_dirs:
                    candidates.append(Path(b) / url.netloc / tail)
                    candidates.append(Path(b) / tail)
        if namespace and namespace in self.namespace_map:
            candidates.append(Path(self.namespace_map[namespace]))
        for c in candidates:
            if c.is_file():
                return c.resolve()
        return None


def _strip_comment(line: str) -> str:
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


@dataclass
class LoadReport:
    documents_loaded: int = 0
    unresolved: list[tuple[str, str]] = field(default_factory=list)
    cycles_collapsed: int = 0
    partial_namespaces: list[str] = field(default_factory=list)
    missing_references: int = 0
    unsupported: list[str] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.unresolved or self.partial_namespaces or self.missing_references)


def count_lines(data: bytes) -> int:
    """Physical lines of a file's bytes; a final line without newline counts."""
    return len(data.splitlines())


def count_loc(schema_set: SchemaSet) -> int:
    return sum(d.line_count for d in schema_set.documents)


def count_files(schema_set: SchemaSet) -> int:
    return len(schema_set.documents)


def _is_true(value: Optional[str]) -> bool:
    return value is not None and value.strip() in ("true", "1")


def _occurs(value: Optional[str], default: Optional[int] = 1) -> Optional[int]:
    if value is None:
        return default
    value = value.strip()
    if value == "unbounded":
        return None
    try:
        return int(value)
    except ValueError:
        return default


class _DocumentParser:
    """Turns one schema document into raw components appended to ``sink``.

    References are stored as QualifiedNames in the ``*_name`` fields and
    resolved later by :class:`_Linker`.
    """

    def __init__(self, root, location: str, namespace: str, chameleon: bool, sink: list):
        self.root = root
        self.location = location
        self.tns = namespace
        self.chameleon = chameleon
        self.sink = sink
        self.element_qualified = root.get("elementFormDefault") == "qualified"
        self.attribute_qualified = root.get("attributeFormDefault") == "qualified"
        self.context: Optional[int] = None

    def qname(self, el, value: str) -> QualifiedName:
        value = value.strip()
        if ":" in value:
            prefix, local = value.split(":", 1)
            ns = el.nsmap.get(prefix)
            if ns is None:
                raise ParseError(self.location, f"undeclared prefix {prefix!r}", el.sourceline or 0)
        else:
            local, ns = value, el.nsmap.get(None, "")
        if self.chameleon and not ns:
            ns = self.tns
        return QualifiedName(ns, local)

    def _reserve(self) -> int:
        self.sink.append(None)
        return len(self.sink) - 1

    def _emit(self, cid: int, **kw) -> int:
        self.sink[cid] = SchemaComponent(
            id=cid, owner_document=self.location, context=self.context, **kw
        )
        return cid

    def parse(self) -> None:
        for child in self.root:
            if not isinstance(child.tag, str) or not child.tag.startswith(XS):
                continue
            tag = child.tag[len(XS):]
            handler = {
                "complexType": self.complex_type,
                "simpleType": self.simple_type,
                "element": self.global_element,
                "attribute": self.global_attribute,
                "group": self.model_group,
                "attributeGroup": self.attribute_group,
            }.get(tag)
            if handler is None:
                continue
            name = child.get("name")
            if not name:
                raise ParseError(self.location, f"global {tag} without a name", child.sourceline or 0)
            self.context = None
            handler(child, QualifiedName(self.tns, name))

    # -- global declarations -------------------------------------------

    def global_element(self, el, name: QualifiedName) -> int:
        cid = self._reserve()
        self.context = cid
        declared, type_name = self._element_type(el)
        head = el.get("substitutionGroup")
        payload = ElementPayload(
            declared_type=declared,
            type_name=type_name,
            head_name=self.qname(el, head.split()[0]) if head and head.split() else None,
            is_abstract=_is_true(el.get("abstract")),
        )
        return self._emit(
            cid, kind=Kind.ELEMENT, name=name, is_global=True,
            is_abstract=payload.is_abstract, structure=payload, line=el.sourceline or 0,
        )

    def global_attribute(self, el, name: QualifiedName) -> int:
        cid = self._reserve()
        self.context = cid
        declared, type_name = self._attribute_type(el)
        return self._emit(
            cid, kind=Kind.ATTRIBUTE, name=name, is_global=True, is_abstract=False,
            structure=AttributePayload(declared, type_name), line=el.sourceline or 0,
        )

    def model_group(self, el, name: QualifiedName) -> int:
        cid = self._reserve()
        self.context = cid
        compositor, particles = "sequence", []
        for child in self._xs_children(el):
            tag = child.tag[len(XS):]
            if tag in _COMPOSITORS:
                compositor = tag
                particles = self._particles(child, (tag,))
        return self._emit(
            cid, kind=Kind.MODEL_GROUP, name=name, is_global=True, is_abstract=False,
            structure=ModelGroupPayload(compositor, tuple(particles)), line=el.sourceline or 0,
        )

    def attribute_group(self, el, name: QualifiedName) -> int:
        cid = self._reserve()
        self.context = cid
        return self._emit(
            cid, kind=Kind.ATTRIBUTE_GROUP, name=name, is_global=True, is_abstract=False,
            structure=AttributeGroupPayload(tuple(self._attribute_uses(el))),
            line=el.sourceline or 0,
        )

    # -- types ---------------------------------------------------------

    def complex_type(self, el, name: Optional[QualifiedName] = None) -> int:
        cid = self._reserve()
        if self.context is None:
            self.context = cid
        derivation, base_name, simple = Derivation.NONE, None, False
        particles: list[Particle] = []
        attributes: list[AttributeUse] = []
        body = el
        for child in self._xs_children(el):
            tag = child.tag[len(XS):]
            if tag in ("complexContent", "simpleContent"):
                simple = tag == "simpleContent"
                for d in self._xs_children(child):
                    dtag = d.tag[len(XS):]
                    if dtag in ("extension", "restriction"):
                        derivation = Derivation(dtag)
                        base_name = self.qname(d, d.get("base")) if d.get("base") else None
                        body = d
                        if simple and dtag == "restriction":
                            # inline simpleType inside a simpleContent restriction
                            for s in self._xs_children(d):
                                if s.tag == XS + "simpleType":
                                    self.simple_type(s)
        for child in self._xs_children(body):
            tag = child.tag[len(XS):]
            if tag in _COMPOSITORS:
                particles.extend(self._particles(child, (tag,)))
            elif tag == "group":
                particles.append(self._group_ref(child, ()))
        attributes = self._attribute_uses(body)
        if derivation is not Derivation.NONE and base_name is None:
            derivation = Derivation.NONE
        payload = ComplexTypePayload(
            derivation=derivation,
            base_name=base_name,
            simple_content=simple,
            particles=tuple(particles),
            attribute_uses=tuple(attributes),
        )
        return self._emit(
            cid, kind=Kind.COMPLEX_TYPE, name=name, is_global=name is not None,
            is_abstract=_is_true(el.get("abstract")), structure=payload, line=el.sourceline or 0,
        )

    def simple_type(self, el, name: Optional[QualifiedName] = None) -> int:
        cid = self._reserve()
        if self.context is None:
            self.context = cid
        variety, base_name = "atomic", None
        used: list = []
        for child in self._xs_children(el):
            tag = child.tag[len(XS):]
            if tag == "restriction":
                if child.get("base"):
                    base_name = self.qname(child, child.get("base"))
                for s in self._xs_children(child):
                    if s.tag == XS + "simpleType":
                        used.append(self.simple_type(s))
            elif tag == "list":
                variety = "list"
                if child.get("itemType"):
                    used.append(self.qname(child, child.get("itemType")))
                for s in self._xs_children(child):
                    if s.tag == XS + "simpleType":
                        used.append(self.simple_type(s))
            elif tag == "union":
                variety = "union"
                for token in (child.get("memberTypes") or "").split():
                    used.append(self.qname(child, token))
                for s in self._xs_children(child):
                    if s.tag == XS + "simpleType":
                        used.append(self.simple_type(s))
        payload = SimpleTypePayload(variety=variety, base_name=base_name, used_types=tuple(used))
        return self._emit(
            cid, kind=Kind.SIMPLE_TYPE, name=name, is_global=name is not None,
            is_abstract=False, structure=payload, line=el.sourceline or 0,
        )

    # -- content -------------------------------------------------------

    def _xs_children(self, el):
        return [c for c in el if isinstance(c.tag, str) and c.tag.startswith(XS)]

    def _element_type(self, el) -> tuple[Optional[int], Optional[QualifiedName]]:
        if el.get("type"):
            return None, self.qname(el, el.get("type"))
        for child in self._xs_children(el):
            if child.tag == XS + "complexType":
                return self.complex_type(child), None
            if child.tag == XS + "simpleType":
                return self.simple_type(child), None
        return None, None

    def _attribute_type(self, el) -> tuple[Optional[int], Optional[QualifiedName]]:
        if el.get("type"):
            return None, self.qname(el, el.get("type"))
        for child in self._xs_children(el):
            if child.tag == XS + "simpleType":
                return self.simple_type(child), None
        return None, None

    def _particles(self, compositor, path: tuple[str, ...]) -> list[Particle]:
        out: list[Particle] = []
        for child in self._xs_children(compositor):
            tag = child.tag[len(XS):]
            line = child.sourceline or 0
            occurs = dict(
                min_occurs=_occurs(child.get("minOccurs"), 1) or 0,
                max_occurs=_occurs(child.get("maxOccurs"), 1),
                compositor_path=path,
                line=line,
            )
            if tag == "element":
                if child.get("ref"):
                    out.append(Particle(
                        ParticleKind.ELEMENT_REFERENCE, name=self.qname(child, child.get("ref")), **occurs
                    ))
                else:
                    local = child.get("name")
                    if not local:
                        raise ParseError(self.location, "local element without name or ref", line)
                    form = child.get("form")
                    qualified = form == "qualified" if form else self.element_qualified
                    declared, type_name = self._element_type(child)
                    out.append(Particle(
                        ParticleKind.ELEMENT_DECLARATION,
                        name=QualifiedName(self.tns if qualified else "", local),
                        declared_type=declared,
                        type_name=type_name,
                        **occurs,
                    ))
            elif tag == "group":
                out.append(self._group_ref(child, path))
            elif tag == "any":
                out.append(Particle(ParticleKind.WILDCARD, **occurs))
            elif tag in _COMPOSITORS:
                out.extend(self._particles(child, path + (tag,)))
        return out

    def _group_ref(self, el, path: tuple[str, ...]) -> Particle:
        ref = el.get("ref")
        if not ref:
            raise ParseError(self.location, "local group without ref", el.sourceline or 0)
        return Particle(
            ParticleKind.GROUP_REFERENCE,
            name=self.qname(el, ref),
            min_occurs=_occurs(el.get("minOccurs"), 1) or 0,
            max_occurs=_occurs(el.get("maxOccurs"), 1),
            compositor_path=path,
            line=el.sourceline or 0,
        )

    def _attribute_uses(self, el) -> list[AttributeUse]:
        out: list[AttributeUse] = []
        for child in self._xs_children(el):
            tag = child.tag[len(XS):]
            line = child.sourceline or 0
            if tag == "attribute":
                prohibited = child.get("use") == "prohibited"
                if child.get("ref"):
                    out.append(AttributeUse(
                        AttributeUseKind.REFERENCE, name=self.qname(child, child.get("ref")),
                        prohibited=prohibited, line=line,
                    ))
                else:
                    local = child.get("name")
                    if not local:
                        raise ParseError(self.location, "local attribute without name or ref", line)
                    form = child.get("form")
                    qualified = form == "qualified" if form else self.attribute_qualified
                    declared, type_name = self._attribute_type(child)
                    out.append(AttributeUse(
                        AttributeUseKind.DECLARATION,
                        name=QualifiedName(self.tns if qualified else "", local),
                        declared_type=declared, type_name=type_name,
                        prohibited=prohibited, line=line,
                    ))
            elif tag == "attributeGroup" and child.get("ref"):
                out.append(AttributeUse(
                    AttributeUseKind.GROUP_REFERENCE, name=self.qname(child, child.get("ref")), line=line
                ))
            elif tag == "anyAttribute":
                out.append(AttributeUse(AttributeUseKind.WILDCARD, line=line))
        return out


class _Linker:
    """Resolves QName references of raw components into component ids."""

    def __init__(self, components: list[SchemaComponent]):
        self.components = components
        index: dict[tuple[str, QualifiedName], int] = {}
        for c in components:
            if not c.is_global:
                continue
            key = (c.kind.symbol_space, c.name)
            if key in index:
                first = components[index[key]]
                raise DuplicateDefinition(c.kind, c.name, first.location, c.location)
            index[key] = c.id
        self.index = index
        self.view = SchemaSet(components=tuple(components), index=MappingProxyType(index))
        self.missing: list[MissingReference] = []

    def find(self, kind: Kind, name: Optional[QualifiedName], referrer: SchemaComponent) -> Optional[int]:
        if name is None:
            return None
        found = self.view.lookup(kind, name)
        if found is not None and (found.kind is kind or kind.is_type):
            return found.id
        self.missing.append(MissingReference(kind, name, referrer.location))
        return None

    def typ(self, declared: Optional[int], name: Optional[QualifiedName], c) -> Optional[int]:
        if declared is not None:
            return declared
        if name is None:
            return ANY_TYPE_ID
        return self.find(Kind.COMPLEX_TYPE, name, c)

    def particle(self, p: Particle, c: SchemaComponent) -> Particle:
        if p.kind is ParticleKind.ELEMENT_REFERENCE:
            return replace(p, target=self.find(Kind.ELEMENT, p.name, c))
        if p.kind is ParticleKind.GROUP_REFERENCE:
            return replace(p, target=self.find(Kind.MODEL_GROUP, p.name, c))
        if p.kind is ParticleKind.ELEMENT_DECLARATION:
            return replace(p, declared_type=self.typ(p.declared_type, p.type_name, c))
        return p

    def attribute(self, a: AttributeUse, c: SchemaComponent) -> AttributeUse:
        if a.kind is AttributeUseKind.REFERENCE:
            return replace(a, target=self.find(Kind.ATTRIBUTE, a.name, c))
        if a.kind is AttributeUseKind.GROUP_REFERENCE:
            return replace(a, target=self.find(Kind.ATTRIBUTE_GROUP, a.name, c))
        if a.kind is AttributeUseKind.DECLARATION:
            return replace(a, declared_type=self.typ(a.declared_type, a.type_name, c))
        return a

    def link(self) -> tuple[list[SchemaComponent], list[MissingReference]]:
        linked = [self._link_one(c) for c in self.components]
        linked = self._inherit_head_types(linked)
        # element references carry the referenced element's type
        for i, c in enumerate(linked):
            s = c.structure
            if isinstance(s, (ComplexTypePayload, ModelGroupPayload)):
                ps = tuple(
                    replace(p, declared_type=linked[p.target].structure.declared_type)
                    if p.kind is ParticleKind.ELEMENT_REFERENCE and p.target is not None else p
                    for p in s.particles
                )
                linked[i] = replace(c, structure=replace(s, particles=ps))
        return linked, self.missing

    def _link_one(self, c: SchemaComponent) -> SchemaComponent:
        s = c.structure
        if isinstance(s, ComplexTypePayload):
            base = self.find(Kind.COMPLEX_TYPE, s.base_name, c) if s.base_name else None
            derivation = s.derivation if base is not None else Derivation.NONE
            s = replace(
                s,
                derivation=derivation,
                base_type=base,
                particles=tuple(self.particle(p, c) for p in s.particles),
                attribute_uses=tuple(self.attribute(a, c) for a in s.attribute_uses),
            )
        elif isinstance(s, SimpleTypePayload):
            used = []
            for u in s.used_types:
                uid = u if isinstance(u, int) else self.find(Kind.SIMPLE_TYPE, u, c)
                if uid is not None:
                    used.append(uid)
            base = self.find(Kind.SIMPLE_TYPE, s.base_name, c) if s.base_name else None
            s = replace(s, base_type=base, used_types=tuple(used))
        elif isinstance(s, ElementPayload):
            head = self.find(Kind.ELEMENT, s.head_name, c) if s.head_name else None
            declared = s.declared_type
            if declared is None and s.type_name is not None:
                declared = self.find(Kind.COMPLEX_TYPE, s.type_name, c)
            s = replace(s, declared_type=declared, substitution_head=head)
        elif isinstance(s, AttributePayload):
            s = replace(s, declared_type=self.typ(s.declared_type, s.type_name, c))
        elif isinstance(s, ModelGroupPayload):
            s = replace(s, particles=tuple(self.particle(p, c) for p in s.particles))
        elif isinstance(s, AttributeGroupPayload):
            s = replace(s, attribute_uses=tuple(self.attribute(a, c) for a in s.attribute_uses))
        return replace(c, structure=s)

    def _inherit_head_types(self, linked: list[SchemaComponent]) -> list[SchemaComponent]:
        """Untyped global elements take the type of their substitution head."""

        def untyped(c):
            s = c.structure
            return s.declared_type is None and s.type_name is None

        resolved: dict[int, int] = {}

        def type_of(cid: int, seen: frozenset) -> int:
            if cid in resolved:
                return resolved[cid]
            c = linked[cid]
            s = c.structure
            if not untyped(c):
                result = s.declared_type
            elif s.substitution_head is not None and s.substitution_head not in seen:
                result = type_of(s.substitution_head, seen | {cid})
            else:
                result = ANY_TYPE_ID
            resolved[cid] = result
            return result

        for i, c in enumerate(linked):
            if c.kind is Kind.ELEMENT and untyped(c):
                linked[i] = replace(c, structure=replace(c.structure, declared_type=type_of(i, frozenset())))
        return linked


@dataclass
class _Pending:
    path: Path
    namespace: Optional[str]  # chameleon namespace supplied by an includer


def _canonical(path: PathLike) -> Path:
    return Path(os.path.realpath(os.fspath(path)))


def _in_scope(path: Path, scope: str) -> bool:
    if any(ch in scope for ch in "*?["):
        pattern = scope if os.path.isabs(scope) else os.path.join(os.getcwd(), scope)
        return fnmatch.fnmatch(str(path), pattern)
    root = _canonical(scope)
    return path == root or root in path.parents


def load_schema_set(
    entries: Sequence[PathLike],
    main_scope: Optional[PathLike] = None,
    catalog: Optional[ResolutionCatalog] = None,
    strict: bool = False,
) -> tuple[SchemaSet, LoadReport]:
    """Load ``entries`` and every document they transitively include or import.

    Entry documents and documents under ``main_scope`` (a directory or glob;
    by default the first entry's directory) are marked as main. Unresolvable
    locations are recorded in the report; with ``strict`` they raise instead.
    """
    catalog = catalog or ResolutionCatalog()
    report = LoadReport()
    entry_paths = []
    for e in entries:
        p = _canonical(e)
        if not p.is_file():
            raise FileNotFoundError(f"schema entry not found: {e}")
        entry_paths.append(p)
    if main_scope is None and entry_paths:
        scope: Optional[str] = str(entry_paths[0].parent)
    else:
        scope = os.fspath(main_scope) if main_scope is not None else None

    queue: deque[_Pending] = deque()
    known: set[Path] = set()
    for p in entry_paths:
        if p not in known:
            known.add(p)
            queue.append(_Pending(p, None))

    raw: list = []
    documents: list[SchemaDocument] = []
    unresolved_imports: list[str] = []
    loaded_namespaces: set[str] = set()
    entry_set = set(entry_paths)
    parser = etree.XMLParser(resolve_entities=False, no_network=True, remove_comments=False)

    while queue:
        pending = queue.popleft()
        location = str(pending.path)
        data = pending.path.read_bytes()
        try:
            root = etree.fromstring(data, parser, base_url=location)
        except etree.XMLSyntaxError as exc:
            raise ParseError(location, exc.msg, exc.lineno or 0) from exc
        if root.tag != XS + "schema":
            raise ParseError(location, f"root element is {root.tag}, not an XML Schema", root.sourceline or 0)
        own_ns = root.get("targetNamespace", "")
        chameleon = not own_ns and bool(pending.namespace)
        namespace = own_ns or (pending.namespace or "")
        loaded_namespaces.add(namespace)

        includes: list[str] = []
        imports: list[tuple[str, Optional[str]]] = []
        for child in root:
            if not isinstance(child.tag, str):
                continue
            tag = child.tag[len(XS):] if child.tag.startswith(XS) else None
            if tag not in ("include", "import", "redefine", "override"):
                continue
            loc = child.get("schemaLocation")
            ns = child.get("namespace") if tag == "import" else None
            if tag == "import":
                imports.append((ns or "", loc))
                if ns == XSD_NAMESPACE:
                    continue
            else:
                includes.append(loc or "")
            if tag in ("redefine", "override"):
                report.unsupported.append(f"{location}:{child.sourceline}: xs:{tag} contents ignored")
            resolved = catalog.resolve(loc, ns, pending.path.parent)
            if resolved is None:
                if loc:
                    report.unresolved.append((location, loc))
                if tag == "import":
                    unresolved_imports.append(ns or "")
                continue
            if resolved in known:
                report.cycles_collapsed += 1
                continue
            known.add(resolved)
            queue.append(_Pending(resolved, namespace if tag != "import" else None))

        is_main = pending.path in entry_set or (scope is not None and _in_scope(pending.path, scope))
        documents.append(SchemaDocument(
            source_location=location,
            target_namespace=namespace,
            line_count=count_lines(data),
            includes=tuple(includes),
            imports=tuple(imports),
            is_main=is_main,
        ))
        _DocumentParser(root, location, namespace, chameleon, raw).parse()

    components, missing = _Linker(raw).link()
    index = {(c.kind.symbol_space, c.name): c.id for c in components if c.is_global}
    schema_set = SchemaSet(
        documents=tuple(documents),
        components=tuple(components),
        missing_references=tuple(missing),
        index=MappingProxyType(index),
    )
    schema_set.derivation_order  # surfaces DerivationCycle at load time

    report.documents_loaded = len(documents)
    report.missing_references = len(missing)
    partial = {ns for ns in unresolved_imports if ns not in loaded_namespaces}
    partial.update(m.name.namespace_uri for m in missing)
    report.partial_namespaces = sorted(partial)
    for referrer, loc in report.unresolved:
        log.warning("%s: unresolved schema location %s", referrer, loc)
    for m in missing:
        log.warning("%s: unresolved %s reference %s", m.referrer, m.kind.value, m.name)
    if strict:
        if report.unresolved:
            raise UnresolvedLocation(*report.unresolved[0])
        if missing:
            raise UnresolvedReference(missing[0].kind, missing[0].name)
    return schema_set, report

