import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import general_graph_text, jsj_graph_text, load
from gogout.graph import (GogSyntaxError, NotJSJShaped, OrientedEdge, classify_edges, parse_graph,
                          serialize_graph, validate)


def test_three_tori_structure():
    g = load("three_tori")
    assert g.vertex_ids() == ["v0", "v1", "v2", "v3"]
    assert g.outgoing("v0") == [OrientedEdge("e1", "from"), OrientedEdge("e2", "from"),
                                OrientedEdge("e3", "from")]
    f = OrientedEdge("e2", "to")
    assert f.bar == OrientedEdge("e2", "from") and str(f) == "e2@to"
    assert g.origin(f) == "v2" and g.terminus(f) == "v0"
    assert g.owner("b3") == "v3" and g.owner("x1") is None
    assert g.vertex("v1").signature.euler_characteristic == -1


@pytest.mark.parametrize("text, line, col", [
    ("vertex v group=free(1)\n", 1, 1),
    ("graph g\nvertex v group=free(1) colour=red\n", 2, 24),
    ("graph g\nvertex v group=free(1)\nvertex v group=free(1)\n", 3, 8),
    ("graph g\nvertex v group=free(1) gens=a\nedge e from=v to=w group=free(1) emb_from=a emb_to=a\n", 3, None),
    ("graph g\nvertex v group=free(1) gens=a\nedge e from=v to=v group=free(1) emb_from=b emb_to=a\n", 3, None),
    ("graph g\nvertex v group=wild(3)\n", 2, None),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(GogSyntaxError) as info:
        parse_graph(text)
    assert info.value.line == line
    if col is not None:
        assert info.value.column == col


def test_generator_clash_is_rejected():
    text = "graph g\nvertex v group=free(1) gens=a\nvertex w group=free(1) gens=a\n"
    with pytest.raises(GogSyntaxError, match="used by both"):
        parse_graph(text)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_serialize_round_trip(seed, jsj):
    rng = random.Random(seed)
    text = jsj_graph_text(rng) if jsj else general_graph_text(rng)
    g = parse_graph(text)
    again = serialize_graph(g)
    assert serialize_graph(parse_graph(again)) == again
    h = parse_graph(again)
    assert h.vertex_ids() == g.vertex_ids()
    assert [h.embedding(f) for f in h.oriented_edges()] == [g.embedding(f) for f in g.oriented_edges()]


def test_validation_verdicts():
    assert validate(load("three_tori")).ok
    seg = validate(load("segment"))
    assert seg.status("minimal") == "fail" and not seg.ok
    mt = validate(load("mapping_torus"))
    assert mt.status("mapping-torus") == "fail"
    assert validate(load("bs23")).status("mapping-torus") == "pass"


def test_disconnected_graph_fails():
    g = parse_graph("graph g\nvertex v group=free(1)\nvertex w group=free(1)\n")
    assert validate(g).status("connected") == "fail"


def test_embedding_must_be_injective():
    g = parse_graph("graph g\nvertex v group=abelian(2) gens=a\nvertex w group=free(1) gens=b\n"
                    "edge e from=v to=w group=free(1) gens=x emb_from=a emb_to=b^2\n")
    assert validate(g).status("embeddings") == "fail"


def test_classify():
    p = classify_edges(load("three_tori"))
    assert p.e2_inf == ("e1", "e2", "e3") and p.e3 == () and p.v1_inf == ("v0",)
    p = classify_edges(load("rigid_elementary"))
    assert p.e3_inf == ("e",) and p.v3 == ("r",)
    with pytest.raises(NotJSJShaped):
        classify_edges(load("klein_amalgam"))
    with pytest.raises(NotJSJShaped):
        classify_edges(load("bs23"))
