"""Counting metrics and size categories."""
from __future__ import annotations

from dataclasses import dataclass

from .loader import count_files, count_loc
from .model import (
    AttributeUseKind,
    ComplexTypePayload,
    Derivation,
    Kind,
    ParticleKind,
    SchemaSet,
    substitution_closure,
)

LOC_BANDS = ((100, "mini"), (1_000, "small"), (10_000, "medium"), (100_000, "large"))
CT_BELOW, CT_ABOVE = "below-range", "above-range"


@dataclass(frozen=True)
class CountingReport:
    ct: int = 0
    st: int = 0
    el: int = 0
    mg: int = 0
    at: int = 0
    ag: int = 0
    all_global: int = 0
    wildcards: int = 0
    aet: int = 0
    aet_elements: int = 0
    aet_types: int = 0
    sg: int = 0
    sg_heads: int = 0
    td: int = 0
    loc: int = 0
    files: int = 0
    size_category_loc: str = "mini"
    size_category_ct: str = CT_BELOW


def count_components(schema_set: SchemaSet) -> dict[str, int]:
    """Component counts: ``ct``/``st`` include anonymous types, the rest are globals."""
    counts = dict(ct=0, st=0, el=0, mg=0, at=0, ag=0, all_global=0)
    for c in schema_set.components:
        if c.kind is Kind.COMPLEX_TYPE:
            counts["ct"] += 1
        elif c.kind is Kind.SIMPLE_TYPE:
            counts["st"] += 1
        if not c.is_global:
            continue
        counts["all_global"] += 1
        key = {
            Kind.ELEMENT: "el",
            Kind.MODEL_GROUP: "mg",
            Kind.ATTRIBUTE: "at",
            Kind.ATTRIBUTE_GROUP: "ag",
        }.get(c.kind)
        if key:
            counts[key] += 1
    return counts


def count_wildcards(schema_set: SchemaSet) -> int:
    """Number of ``any`` particles plus ``anyAttribute`` uses."""
    total = 0
    for c in schema_set.components:
        s = c.structure
        total += sum(1 for p in getattr(s, "particles", ()) if p.kind is ParticleKind.WILDCARD)
        total += sum(
            1 for a in getattr(s, "attribute_uses", ()) if a.kind is AttributeUseKind.WILDCARD
        )
    return total


def count_subtyping_features(schema_set: SchemaSet) -> dict[str, int]:
    abstract_elements = sum(1 for c in schema_set.globals(Kind.ELEMENT) if c.is_abstract)
    abstract_types = sum(1 for c in schema_set.globals() if c.kind.is_type and c.is_abstract)
    members = sum(
        1 for c in schema_set.globals(Kind.ELEMENT) if c.structure.substitution_head is not None
    )
    heads = sum(1 for head in schema_set.direct_substitutes if substitution_closure(schema_set, head))
    derived = sum(
        1
        for c in schema_set.of_kind(Kind.COMPLEX_TYPE)
        if isinstance(c.structure, ComplexTypePayload)
        and c.structure.derivation is not Derivation.NONE
    )
    return dict(
        aet=abstract_elements + abstract_types,
        aet_elements=abstract_elements,
        aet_types=abstract_types,
        sg=members,
        sg_heads=heads,
        td=derived,
    )


def categorize(loc: int, ct: int) -> tuple[str, str]:
    """Size bands for a schema set.

    LOC bands are half-open ``[lo, hi)``; the #CT ``large`` band is closed at
    1000 so that both ends of the 256-1000 range are large.
    """
    loc_band = "huge"
    for upper, label in LOC_BANDS:
        if loc < upper:
            loc_band = label
            break
    if ct < 32:
        ct_band = CT_BELOW
    elif ct < 100:
        ct_band = "small"
    elif ct < 256:
        ct_band = "medium"
    elif ct <= 1000:
        ct_band = "large"
    else:
        ct_band = CT_ABOVE
    return loc_band, ct_band


def counting_report(schema_set: SchemaSet) -> CountingReport:
    counts = count_components(schema_set)
    loc, files = count_loc(schema_set), count_files(schema_set)
    size_loc, size_ct = categorize(loc, counts["ct"])
    return CountingReport(
        **counts,
        wildcards=count_wildcards(schema_set),
        **count_subtyping_features(schema_set),
        loc=loc,
        files=files,
        size_category_loc=size_loc,
        size_category_ct=size_ct,
    )
