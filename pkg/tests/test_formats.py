import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from selfsim.coloring import Coloring
from selfsim.core import (
    SelfSimilarSystem,
    complete_graph,
    cycle_graph,
    full_bundle,
    graph_from_edges,
    jr_bundle,
    jstar_bundle,
    make_bundle,
    matching_bundle,
    materialize,
    mirror_bundle,
)
from selfsim.formats import (
    ParseError,
    decode_graph6,
    encode_graph6,
    export_graph,
    format_base_graph,
    format_bundle,
    format_certificate,
    load_base,
    load_bundle,
    parse_base_graph,
    parse_bundle,
    parse_certificate,
    parse_dot,
    parse_edgelist,
)


def nx_graph6(vertex_count, edges):
    g = nx.Graph()
    g.add_nodes_from(range(vertex_count))
    g.add_edges_from(edges)
    return nx.to_graph6_bytes(g, nodes=range(vertex_count), header=False).strip()


def test_graph6_k4_hand_encoding():
    k4 = materialize(SelfSimilarSystem(complete_graph(2), full_bundle(2)), 2)
    # size byte 63+4, then six upper-triangle ones packed into one byte: 63+63
    assert export_graph(k4, "graph6") == b"C~\n"


def test_graph6_q3_against_networkx():
    q3 = materialize(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 3)
    cube = nx.convert_node_labels_to_integers(nx.hypercube_graph(3), ordering="sorted")
    assert export_graph(q3, "graph6").strip() == nx.to_graph6_bytes(cube, nodes=range(8), header=False).strip()
    back = nx.from_graph6_bytes(export_graph(q3, "graph6").strip())
    assert sorted(tuple(sorted(e)) for e in back.edges()) == q3.edge_list()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 70).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=40),
)))
def test_graph6_matches_networkx_and_round_trips(data):
    n, raw = data
    edges = sorted({(min(a, b), max(a, b)) for a, b in raw if a != b})
    ours = encode_graph6(n, edges)
    assert ours == nx_graph6(n, edges)
    assert decode_graph6(ours) == (n, edges)


def test_graph6_large_header():
    assert encode_graph6(100, [])[:4] == bytes([126, 63 + 0, 63 + 1, 63 + 36])
    n, edges = decode_graph6(encode_graph6(100, [(0, 99), (5, 6)]))
    assert (n, edges) == (100, [(0, 99), (5, 6)])


def test_graph6_decode_errors():
    with pytest.raises(ParseError):
        decode_graph6(b"")
    with pytest.raises(ParseError):
        decode_graph6(b"C~~")
    with pytest.raises(ParseError):
        decode_graph6(b"C\x20")


@pytest.mark.parametrize("label,system", FIXTURES, ids=[f[0] for f in FIXTURES])
def test_exports_round_trip(label, system):
    graph = materialize(system, 2)
    el = export_graph(graph, "edgelist")
    assert export_graph(parse_edgelist(el, graph.vertex_count), "edgelist") == el
    g6 = export_graph(graph, "graph6")
    n, edges = decode_graph6(g6)
    assert export_graph(graph_from_edges(n, edges), "graph6") == g6
    doc = json.loads(export_graph(graph, "json"))
    assert doc["vertex_count"] == graph.vertex_count and doc["edges"] == [list(e) for e in graph.edge_list()]


def test_edgelist_k2():
    assert export_graph(materialize(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 1), "edgelist") == b"0 1\n"


def test_dot_q2():
    q2 = materialize(SelfSimilarSystem(complete_graph(2), matching_bundle(2)), 2)
    data = export_graph(q2, "dot")
    assert data.startswith(b"graph G {")
    labels, edges = parse_dot(data)
    assert labels == {0: "1.1", 1: "1.2", 2: "2.1", 3: "2.2"}
    assert sorted(edges) == q2.edge_list() and len(edges) == 4
    assert export_graph(q2, "dot") == data


def test_unknown_format():
    with pytest.raises(ValueError):
        export_graph(graph_from_edges(2, [(0, 1)]), "gml")


def test_base_and_bundle_files(tmp_path):
    base = parse_base_graph("3\n1 2\n2 3\n")
    assert base.edges == [(1, 2), (2, 3)]
    assert parse_base_graph(format_base_graph(base)) == base
    bundle = parse_bundle("2\nsymmetrize\n1 2\n1 1\n")
    assert bundle.pairs == [(1, 1), (1, 2), (2, 1)]
    assert parse_bundle(format_bundle(bundle)) == bundle
    with pytest.raises(ParseError):
        parse_bundle("2\n1 2\n")
    with pytest.raises(ParseError):
        parse_base_graph("x\n")
    with pytest.raises(ParseError):
        parse_base_graph("3\n1 2 3\n")
    with pytest.raises(ParseError):
        parse_base_graph("3\n1 1\n")
    path = tmp_path / "g.txt"
    path.write_text("4\n1 2\n", encoding="utf-8")
    assert load_base(str(path)).n == 4


def test_presets():
    assert load_base("kn:4") == complete_graph(4)
    assert load_base("preset:cn:5") == cycle_graph(5)
    assert load_base("en:3").edge_count == 0
    assert load_bundle("matching", 3) == matching_bundle(3)
    assert load_bundle("full", 3) == full_bundle(3)
    assert load_bundle("jstar", 3) == jstar_bundle(3)
    assert load_bundle("jr:1", 3) == jr_bundle(3, 1)
    assert load_bundle("mirror", 5, cycle_graph(5)) == mirror_bundle(cycle_graph(5))
    assert load_bundle("preset:j6", 2) == make_bundle(2, [(1, 1), (1, 2), (2, 1)])
    for bad in ("kn:0", "preset:zz", "nosuchfile"):
        with pytest.raises(ParseError):
            load_base(bad)
    with pytest.raises(ParseError):
        load_bundle("j6", 3)
    with pytest.raises(ParseError):
        load_bundle("jr:5", 3)
    with pytest.raises(ParseError):
        load_bundle("mirror", 3)


def test_jr_preset_shape():
    # r loops, then a loopless complete part on the remaining indices
    assert jr_bundle(4, 2).pairs == [(1, 1), (2, 2), (3, 4), (4, 3)]
    assert jr_bundle(3, 0) == jstar_bundle(3)
    assert jr_bundle(3, 3) == matching_bundle(3)


def test_certificate_round_trip():
    c = Coloring(3, (0, 1, 2, 0))
    text = format_certificate(c)
    assert text.splitlines()[0] == "palette 3"
    assert parse_certificate(text) == c
    with pytest.raises(ParseError):
        parse_certificate("0 1\n")
    with pytest.raises(ParseError):
        parse_certificate("palette 2\n0 1\n2 0\n")
