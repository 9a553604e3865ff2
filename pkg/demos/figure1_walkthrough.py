"""
Metrics of a tiny schema set, step by step
==========================================

A main document (container element, ContainerType) includes an external
document (BaseType, ChildType extending BaseType).
"""
from pathlib import Path

from xsdmetrics.counting import counting_report
from xsdmetrics.cxsd import WeightCache, component_weight, compute_cxsd, detect_recursion
from xsdmetrics.loader import load_schema_set
from xsdmetrics.report import analyze, to_text
from xsdmetrics.subtyping import build_graph, polymorphism_table, reachability

ENTRY = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "figure1" / "main" / "container.xsd"

schema_set, load_report = load_schema_set([ENTRY])
print("documents:", load_report.documents_loaded)
for doc in schema_set.documents:
    print("  ", "main" if doc.is_main else "ext ", Path(doc.source_location).name, doc.line_count, "lines")

# counting metrics: anonymous types would count towards ct too
counts = counting_report(schema_set)
print("ct", counts.ct, "el", counts.el, "td", counts.td, "all_global", counts.all_global)

# weights per global component; recursiveElement re-enters ContainerType
cache = WeightCache(schema_set)
for c in schema_set.globals():
    print(f"  {c.label():15} {component_weight(schema_set, c, cache)}")
print("recursive positions:", detect_recursion(schema_set).total)
print("C(XSD) =", compute_cxsd(schema_set, cache))
print("  at R=10:", compute_cxsd(schema_set, cache).eval(10))

# containerElement is declared with BaseType but may carry ChildType
for row in polymorphism_table(schema_set):
    print(f"  {schema_set.component(row.type_id).label():15} E={row.e_ct} PE={row.pe_ct} OE={row.oe_ct}")

# the hidden derivation edge makes ChildType reachable from the main document
explicit, hidden = build_graph(schema_set), build_graph(schema_set, hidden=True)
for i, j, kind in sorted(hidden.edges - explicit.edges):
    print("hidden:", schema_set.component(i).label(), "->", schema_set.component(j).label(), kind)
r = reachability(schema_set)
print("V_S", r.v_s, "V_Rm(G_S)", len(r.v_rm_gs), "V_Rm(G_SH)", len(r.v_rm_gsh), "SRR", r.srr.rounded())

# the same numbers as one report
print()
print(to_text(analyze([ENTRY])), end="")
