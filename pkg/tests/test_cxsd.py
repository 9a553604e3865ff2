import random
import threading

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

import oracles
import schemagen as g
from xsdmetrics.cxsd import (
    ONE,
    R,
    Weight,
    WeightCache,
    component_weight,
    compute_cxsd,
    detect_recursion,
    referenced_globals,
)
from xsdmetrics.loader import load_schema_set
from xsdmetrics.model import CircularDefinition, Kind, SchemaSet

PROPS = settings(max_examples=40, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])


def by_name(s, local, kind=Kind.COMPLEX_TYPE):
    return next(c for c in s.globals(kind) if c.name.local_name == local)


def weight_of(s, local, kind=Kind.COMPLEX_TYPE):
    return component_weight(s, by_name(s, local, kind))


def test_weight_arithmetic():
    w = Weight(3, 2)
    assert w + ONE == Weight(4, 2) and w - R == Weight(3, 1)
    assert str(w) == "3 + 2R" and str(Weight(5)) == "5"
    assert w.eval(1) == 5 and w.eval(10) == 23
    with pytest.raises(ValueError):
        w.eval(0)
    assert Weight(-4, 0).floored() == Weight(1, 0)
    assert Weight(-4, 2).floored() == Weight(-1, 2)
    assert Weight(2, -3).floored() == Weight(2, 0)


def test_figure1_hand_expansion(figure1):
    s, _ = figure1
    # BaseType: implicit base 1 + baseElement 1 + attribute id 1
    assert weight_of(s, "BaseType") == Weight(3)
    # ChildType: BaseType 3 + childElement 1
    assert weight_of(s, "ChildType") == Weight(4)
    # ContainerType: base 1 + containerElement (BaseType 3) + recursive position R
    assert weight_of(s, "ContainerType") == Weight(4, 1)
    assert weight_of(s, "container", Kind.ELEMENT) == Weight(4, 1)
    # container (4 + 1R) plus unreferenced ChildType (4)
    assert compute_cxsd(s) == Weight(8, 1)
    assert {s.component(i).name.local_name for i in referenced_globals(s)} == {"BaseType", "ContainerType"}


def test_figure1_recursion_flags(figure1):
    s, _ = figure1
    info = detect_recursion(s)
    container = by_name(s, "ContainerType")
    names = [p.name.local_name for p in container.structure.particles]
    assert info.nrc(container.id) == 1
    assert info.is_recursive(container.id, names.index("recursiveElement"))
    assert info.nrc(by_name(s, "BaseType").id) == 0
    assert info.flagged == oracles.flagged_positions(s)


def test_empty_set():
    assert compute_cxsd(SchemaSet()) == Weight(0)


def test_mutual_recursion(write):
    p = write("m.xsd", """
      <xs:complexType name="T"><xs:sequence>
        <xs:element name="u" type="t:U"/><xs:element name="s" type="xs:string"/>
      </xs:sequence></xs:complexType>
      <xs:complexType name="U"><xs:sequence><xs:element name="t" type="t:T"/></xs:sequence></xs:complexType>""")
    s, _ = load_schema_set([p])
    t, u = by_name(s, "T"), by_name(s, "U")
    info = detect_recursion(s)
    cycles = list(nx.simple_cycles(oracles.containment_graph(s)))
    assert sorted(map(sorted, cycles)) == [sorted([t.id, u.id])]
    # one flagged position per type on the cycle
    assert info.nrc(t.id) == 1 and info.nrc(u.id) == 1
    assert info.flagged == oracles.flagged_positions(s)
    assert component_weight(s, t) == Weight(2, 1)
    assert component_weight(s, u) == Weight(1, 1)


def test_recursion_through_group_and_ref(write):
    p = write("r.xsd", """
      <xs:element name="node" type="t:Node"/>
      <xs:group name="Kids"><xs:sequence><xs:element ref="t:node"/></xs:sequence></xs:group>
      <xs:complexType name="Node"><xs:sequence><xs:group ref="t:Kids"/></xs:sequence>
        <xs:attribute name="id" type="xs:ID"/></xs:complexType>""")
    s, _ = load_schema_set([p])
    kids = by_name(s, "Kids", Kind.MODEL_GROUP)
    assert detect_recursion(s).nrc(kids.id) == 1
    assert weight_of(s, "Node") == Weight(2, 1)  # base 1 + group (R) + attribute 1
    assert compute_cxsd(s) == Weight(2, 1)


def test_restriction_removes_base_members(write):
    p = write("x.xsd", """
      <xs:complexType name="B"><xs:sequence>
        <xs:element name="a" type="xs:int"/><xs:element name="b" type="xs:int"/>
        <xs:element name="c" type="t:Pair"/>
      </xs:sequence><xs:attribute name="k" type="xs:string"/></xs:complexType>
      <xs:complexType name="Pair"><xs:sequence>
        <xs:element name="l" type="xs:int"/><xs:element name="r" type="xs:int"/>
      </xs:sequence></xs:complexType>
      <xs:complexType name="D"><xs:complexContent><xs:restriction base="t:B"><xs:sequence>
        <xs:element name="a" type="xs:int"/><xs:element name="b" type="xs:int"/>
      </xs:sequence><xs:attribute name="k" use="prohibited"/></xs:restriction></xs:complexContent>
      </xs:complexType>
      <xs:complexType name="E"><xs:complexContent><xs:restriction base="t:B"><xs:sequence>
        <xs:element name="a" type="xs:int"/><xs:element name="b" type="xs:int"/><xs:element name="c" type="t:Pair"/>
      </xs:sequence><xs:attribute name="k" type="xs:string"/></xs:restriction></xs:complexContent>
      </xs:complexType>
      <xs:complexType name="F"><xs:complexContent><xs:restriction base="t:E">
      </xs:restriction></xs:complexContent></xs:complexType>""")
    s, _ = load_schema_set([p])
    assert weight_of(s, "Pair") == Weight(3)
    assert weight_of(s, "B") == Weight(7)  # 1 + a + b + Pair(3) + k
    assert weight_of(s, "D") == Weight(3)  # drops c (3) and prohibits k (1)
    assert weight_of(s, "E") == Weight(7)  # keeps everything
    assert weight_of(s, "F") == Weight(1)  # drops all six units, floored at 1


def test_prohibiting_absent_attribute_subtracts_one(write):
    p = write("p.xsd", """
      <xs:complexType name="B"><xs:sequence><xs:element name="a" type="xs:int"/></xs:sequence></xs:complexType>
      <xs:complexType name="D"><xs:complexContent><xs:restriction base="t:B"><xs:sequence>
        <xs:element name="a" type="xs:int"/></xs:sequence><xs:attribute name="zz" use="prohibited"/>
      </xs:restriction></xs:complexContent></xs:complexType>""")
    s, _ = load_schema_set([p])
    assert weight_of(s, "D") == Weight(1)


def test_empty_group_is_floored(write):
    p = write("e.xsd", '<xs:group name="G"><xs:sequence/></xs:group>'
                       '<xs:attributeGroup name="AG"/>')
    s, _ = load_schema_set([p])
    assert weight_of(s, "G", Kind.MODEL_GROUP) == Weight(1)
    assert weight_of(s, "AG", Kind.ATTRIBUTE_GROUP) == Weight(1)
    assert compute_cxsd(s) == Weight(2)


def test_group_only_cycle_is_circular(write):
    p = write("g.xsd", """
      <xs:group name="A"><xs:sequence><xs:group ref="t:B"/></xs:sequence></xs:group>
      <xs:group name="B"><xs:sequence><xs:group ref="t:A"/></xs:sequence></xs:group>
      <xs:element name="e"><xs:complexType><xs:group ref="t:A"/></xs:complexType></xs:element>""")
    s, _ = load_schema_set([p])
    with pytest.raises(CircularDefinition):
        component_weight(s, by_name(s, "B", Kind.MODEL_GROUP))
    with pytest.raises(CircularDefinition):
        compute_cxsd(s)


def test_attribute_group_and_element_ref_weights(write):
    p = write("a.xsd", """
      <xs:attributeGroup name="AG"><xs:attribute name="x" type="xs:int"/><xs:attribute ref="t:y"/>
        <xs:anyAttribute/></xs:attributeGroup>
      <xs:attribute name="y" type="xs:int"/>
      <xs:element name="e" type="t:T"/>
      <xs:complexType name="T"><xs:sequence><xs:any/></xs:sequence><xs:attributeGroup ref="t:AG"/></xs:complexType>
      <xs:complexType name="W"><xs:sequence><xs:element ref="t:e"/></xs:sequence></xs:complexType>""")
    s, _ = load_schema_set([p])
    assert weight_of(s, "AG", Kind.ATTRIBUTE_GROUP) == Weight(3)
    assert weight_of(s, "T") == Weight(5)  # 1 + any + AG(3)
    assert weight_of(s, "W") == Weight(6)  # 1 + e (T = 5)
    # e (5) + y (1) + unreferenced W (6); AG and T are referenced
    assert compute_cxsd(s) == Weight(12)


def _random_order_weights(s, rnd):
    order = list(s.components)
    rnd.shuffle(order)
    cache = WeightCache(s)
    return {c.id: component_weight(s, c, cache) for c in order}, compute_cxsd(s, cache)


@PROPS
@given(st.randoms(use_true_random=False))
def test_order_independence(tmp_path_factory, rnd):
    s, _ = load_schema_set([g.render(g.generate(rnd), tmp_path_factory.mktemp("o"))])
    first = _random_order_weights(s, rnd)
    for _ in range(3):
        assert _random_order_weights(s, rnd) == first


@PROPS
@given(st.randoms(use_true_random=False))
def test_matches_expansion_oracle(tmp_path_factory, rnd):
    spec = g.generate(rnd, restriction=False)
    s, _ = load_schema_set([g.render(spec, tmp_path_factory.mktemp("x"))])
    expected = oracles.expansion_weights(s)
    cache = WeightCache(s)
    assert cache.recursion.flagged == oracles.flagged_positions(s)
    for c in s.components:
        assert component_weight(s, c, cache) == Weight(*expected[c.id])


@PROPS
@given(st.randoms(use_true_random=False))
def test_weights_are_at_least_one(tmp_path_factory, rnd):
    s, _ = load_schema_set([g.render(g.generate(rnd), tmp_path_factory.mktemp("f"))])
    cache = WeightCache(s)
    for c in s.components:
        w = component_weight(s, c, cache)
        assert w.recursion_coeff >= 0 and w.eval(1) >= 1


def test_concurrent_evaluation_matches_sequential(tmp_path):
    spec = g.generate(random.Random(7), max_components=50)
    s, _ = load_schema_set([g.render(spec, tmp_path)])
    sequential = {c.id: component_weight(s, c) for c in s.components}
    cache = WeightCache(s)
    results = {}

    def worker(seed):
        order = list(s.components)
        random.Random(seed).shuffle(order)
        results[seed] = {c.id: component_weight(s, c, cache) for c in order}

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == sequential for r in results.values())


def test_disjoint_union_additive(tmp_path):
    a = g.generate(random.Random(1), namespace="urn:a")
    b = g.generate(random.Random(2), namespace="urn:b")
    ea = g.render(a, tmp_path / "a")
    eb = g.render(b, tmp_path / "b")
    sa, _ = load_schema_set([ea])
    sb, _ = load_schema_set([eb])
    su, _ = load_schema_set([ea, eb])
    assert compute_cxsd(su) == compute_cxsd(sa) + compute_cxsd(sb)
    assert len(su.components) == len(sa.components) + len(sb.components)
