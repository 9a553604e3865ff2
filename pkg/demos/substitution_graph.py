"""
Hidden dependencies from substitution groups and derivation
===========================================================

A drawing refers to an abstract Shape element. Concrete shapes live in an
external document and are only reachable through the substitution group,
so the explicit graph misses them.
"""
import tempfile
from pathlib import Path

from xsdmetrics.report import analyze, to_dot
from xsdmetrics.loader import load_schema_set
from xsdmetrics.subtyping import positions

XS = 'xmlns:xs="http://www.w3.org/2001/XMLSchema" xmlns:g="urn:geo" targetNamespace="urn:geo"'
MAIN = f"""<xs:schema {XS}>
  <xs:include schemaLocation="../shapes/shapes.xsd"/>
  <xs:element name="drawing" type="g:Drawing"/>
  <xs:complexType name="Drawing">
    <xs:sequence>
      <xs:element ref="g:Shape" maxOccurs="unbounded"/>
      <xs:element name="style" type="g:Style"/>
    </xs:sequence>
  </xs:complexType>
</xs:schema>
"""
SHAPES = f"""<xs:schema {XS}>
  <xs:element name="Shape" type="g:ShapeType" abstract="true"/>
  <xs:element name="Circle" type="g:CircleType" substitutionGroup="g:Shape"/>
  <xs:element name="Polygon" type="g:ShapeType" substitutionGroup="g:Shape"/>
  <xs:complexType name="ShapeType" abstract="true">
    <xs:attribute name="id" type="xs:ID"/>
  </xs:complexType>
  <xs:complexType name="CircleType">
    <xs:complexContent>
      <xs:extension base="g:ShapeType">
        <xs:attribute name="radius" type="xs:double"/>
      </xs:extension>
    </xs:complexContent>
  </xs:complexType>
  <xs:complexType name="Style"/>
  <xs:complexType name="DashedStyle">
    <xs:complexContent><xs:extension base="g:Style"/></xs:complexContent>
  </xs:complexType>
</xs:schema>
"""

with tempfile.TemporaryDirectory() as tmp:
    (Path(tmp) / "main").mkdir()
    (Path(tmp) / "shapes").mkdir()
    entry = Path(tmp) / "main" / "drawing.xsd"
    entry.write_text(MAIN)
    (Path(tmp) / "shapes" / "shapes.xsd").write_text(SHAPES)
    schema_set, _ = load_schema_set([entry])
    report = analyze([entry])

drawing = next(c for c in schema_set.globals() if c.label() == "Drawing")
for p in positions(schema_set, drawing):
    subs = [schema_set.component(i).label() for i in p.substitutes]
    types = [schema_set.component(i).label() for i in p.dynamic_types]
    print(f"{p.particle.name.local_name:8} substitutes={subs} dynamic types={types}")

print("DPR", report.dpr.rounded(), "DPF", report.dpf.rounded())
print("reachable from main: explicit", report.v_rm_gs, "with hidden", report.v_rm_gsh, "of", report.v_s)
print("SRR", report.srr.rounded())

# dashed edges are the hidden ones; pipe into `dot -Tsvg` to draw
print(to_dot(schema_set, hidden=True), end="")
