import pytest

from bruteforce import invariant_factors_by_minors
from corpus import jsj_corpus, load, relation_corpus
from gogout.automorphisms import compose_all, is_inner_with_witness, twist
from gogout.graph import OrientedEdge, classify_edges, parse_graph
from gogout.lattice import (HypothesisError, NonAbelianBlock, build_j_matrix, kernel_check,
                            twist_group_structure)
from gogout.presentation import YES, fundamental_presentation
from gogout.words import mul, parse_word, power, substitute


def test_three_tori_matrix():
    lat = build_j_matrix(load("three_tori"))
    assert [lbl for lbl, _ in lat.rows] == [
        "Z(e1@from)[c]", "Z(e1@to)[a1 b1 a1^-1 b1^-1]", "Z(e2@from)[c]",
        "Z(e2@to)[a2 b2 a2^-1 b2^-1]", "Z(e3@from)[c]", "Z(e3@to)[a3 b3 a3^-1 b3^-1]"]
    assert [lbl for lbl, _ in lat.columns] == ["Z(v0)[c]", "Z(e1)[x1]", "Z(e2)[x2]", "Z(e3)[x3]"]
    assert lat.matrix == [[1, 1, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0],
                          [0, 0, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1]]
    assert str(lat.cokernel()) == "Z^2"
    assert lat.dump().splitlines()[0].split() == ["Z(v0)[c]", "Z(e1)[x1]", "Z(e2)[x2]", "Z(e3)[x3]"]


def test_small_structures():
    assert build_j_matrix(load("rigid_elementary")).matrix == [[1, 2], [0, 1]]
    assert twist_group_structure(load("rigid_elementary")).trivial
    assert str(twist_group_structure(load("rigid_elementary_rigid"))) == "Z"
    assert twist_group_structure(load("bs23")).trivial
    assert twist_group_structure(load("free_product")).trivial
    # the centralizer of <a> in the Klein bottle group is <a, t^2>
    assert str(twist_group_structure(load("klein_amalgam"))) == "Z"


def test_single_vertex():
    g = parse_graph("graph one\nvertex v group=abelian(0) gens=c\n")
    lat = build_j_matrix(g)
    assert lat.rows == [] and twist_group_structure(g).trivial
    k = kernel_check(g)
    assert k.kernel_rank == 1 and k.center_rank == 1 and k.consistent


def test_kernel_check():
    k = kernel_check(load("three_tori"))
    assert (k.kernel_rank, k.center_rank, k.consistent) == (0, 0, True)
    assert kernel_check(load("bs23")).consistent is None
    assert kernel_check(load("bs23"), center_rank=0).consistent


def test_hypothesis_gate():
    with pytest.raises(HypothesisError, match="mapping torus"):
        twist_group_structure(load("mapping_torus"))
    with pytest.raises(HypothesisError, match="minimal"):
        kernel_check(load("segment"))
    assert twist_group_structure(load("mapping_torus"), assume_hypotheses=True) is not None


def test_symbolic_fallback():
    g = parse_graph("graph fp\nvertex v group=free(2) gens=a,b\nvertex w group=free(1) gens=c\n"
                    "edge e from=v to=w group=free(0) emb_from= emb_to=\n")
    with pytest.raises(NonAbelianBlock) as info:
        build_j_matrix(g)
    sym = info.value.symbolic
    assert sym.generators == ("D[e@from]", "D[e@to]")
    assert "D[e@from](z) D[e@to](z)" in str(sym)


def test_torsion_rows():
    g = parse_graph("graph tor\nvertex v group=abelian(0,2) gens=a,b\nvertex w group=free(2) gens=c,d\n"
                    "edge e from=v to=w group=free(1) gens=x emb_from=a emb_to=c\n")
    lat = build_j_matrix(g)
    assert [d for _, d in lat.rows] == [0, 2, 0]
    full = lat.full_matrix()
    assert len(full[0]) == len(lat.columns) + 1
    # Z x Z/2 x Z modulo (1,0,0), (0,1,0) and (1,0,1): the b-twist dies against the center of G_v
    assert lat.cokernel().trivial


def test_cokernel_matches_minor_gcds():
    numeric = 0
    for g in relation_corpus(30):
        try:
            lat = build_j_matrix(g)
        except NonAbelianBlock as exc:
            assert exc.symbolic.generators      # non-abelian centralizer: symbolic only
            continue
        numeric += 1
        full = lat.full_matrix()
        minors = invariant_factors_by_minors(full) if full and full[0] else []
        coker = lat.cokernel()
        assert list(coker.torsion) == [d for d in minors if d != 1], g.name
        assert coker.free_rank == len(lat.rows) - len(minors), g.name
    assert numeric >= 10


def _column_automorphism(p, lat, j):
    """Product of the twists recorded in column j of the matrix."""
    factors = []
    for b in lat.blocks:
        z = mul(*[power(w, lat.matrix[b.start + i][j]) for i, w in enumerate(b.basis)])
        if z:
            factors.append(twist(p, b.edge, z))
    return compose_all(factors) if factors else None


def _witness(g, p, label):
    """Expected conjugator of the vertex or edge relation behind a column."""
    owner, _, word = label[2:].partition(")[")
    z = parse_word(word[:-1])
    if owner in g.vertex_ids():
        return z
    if owner not in p.subtree:
        return ()
    edge = g.edge(owner)
    return substitute(z, dict(zip(edge.gens, g.embedding(OrientedEdge(owner, "from")))))


@pytest.mark.parametrize("name", ["three_tori", "klein_amalgam", "bs23", "rigid_elementary_rigid",
                                  "pants_star"])
def test_columns_are_inner(name):
    g = load(name)
    p = fundamental_presentation(g)
    lat = build_j_matrix(g)
    for j, (label, _) in enumerate(lat.columns):
        a = _column_automorphism(p, lat, j)
        assert a is not None
        assert is_inner_with_witness(a, _witness(g, p, label)) == YES, label


def test_jsj_corpus_ranks():
    for g in jsj_corpus(24):
        part = classify_edges(g)
        coker = twist_group_structure(g)
        assert coker.torsion == ()
        assert coker.free_rank == len(g.edges) - len(part.v1), g.name
