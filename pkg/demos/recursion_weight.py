"""
How the recursion weight R moves C(XSD)
=======================================

Builds a small recursive schema in a temporary directory: a Section holds
Paragraphs and nested Sections, and a Paragraph may hold inline Notes that
contain Paragraphs again.
"""
import tempfile
from pathlib import Path

from xsdmetrics.cxsd import WeightCache, component_weight, compute_cxsd, detect_recursion
from xsdmetrics.loader import load_schema_set

SCHEMA = """<?xml version="1.0"?>
<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema" xmlns:d="urn:doc" targetNamespace="urn:doc">
  <xs:element name="document" type="d:Section"/>
  <xs:complexType name="Section">
    <xs:sequence>
      <xs:element name="title" type="xs:string"/>
      <xs:element name="para" type="d:Paragraph" maxOccurs="unbounded"/>
      <xs:element name="section" type="d:Section" minOccurs="0" maxOccurs="unbounded"/>
    </xs:sequence>
    <xs:attribute name="id" type="xs:ID"/>
  </xs:complexType>
  <xs:complexType name="Paragraph" mixed="true">
    <xs:sequence>
      <xs:element name="note" type="d:Note" minOccurs="0"/>
    </xs:sequence>
  </xs:complexType>
  <xs:complexType name="Note">
    <xs:sequence>
      <xs:element name="para" type="d:Paragraph"/>
    </xs:sequence>
  </xs:complexType>
</xs:schema>
"""

with tempfile.TemporaryDirectory() as tmp:
    entry = Path(tmp) / "doc.xsd"
    entry.write_text(SCHEMA)
    schema_set, _ = load_schema_set([entry])

info = detect_recursion(schema_set)
cache = WeightCache(schema_set, info)
for c in schema_set.globals():
    print(f"{c.label():10} weight {str(component_weight(schema_set, c, cache)):8} NRC {info.nrc(c.id)}")

total = compute_cxsd(schema_set, cache)
print("C(XSD) =", total)

# a larger R stands for deeper expected nesting in instance documents
for r in (1, 2, 5, 10, 50):
    print(f"R={r:<3} C(XSD)={total.eval(r)}")
