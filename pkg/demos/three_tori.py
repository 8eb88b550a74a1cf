"""Three once-punctured tori glued along their common boundary curve.

Walks through the twist group, the counting invariants and the shape of
Out(G) for the graph with one cyclic vertex and three surface vertices.
"""

from importlib import resources

from gogout.automorphisms import check_edge_relation, check_vertex_relation, is_inner, twist
from gogout.graph import parse_graph, validate
from gogout.lattice import build_j_matrix
from gogout.presentation import fundamental_presentation
from gogout.report import structure_report
from gogout.words import format_word, parse_word

text = resources.files("gogout").joinpath("data", "three_tori.gog").read_text()
g = parse_graph(text)
print(validate(g), end="\n\n")

p = fundamental_presentation(g)
print("generators:", ", ".join(p.generators))
for r in p.relators:
    print("  relator", format_word(r))

# twisting by c around one edge near v0 conjugates one torus by c
a = twist(p, "e1@from", parse_word("c"))
print("\ntwist by c around e1 near v0:")
for x in ("a1", "b1", "a2"):
    print(f"  {x} -> {format_word(a.image(x))}")
print("inner (witness search up to length 3):", is_inner(a, max_length=3))

# twisting by c around all three edges is conjugation by c
print("\nvertex relation at v0 holds:", check_vertex_relation(p, "v0", parse_word("c")))
print("edge relation at e1 holds:", check_edge_relation(p, "e1", parse_word("x1")))

lat = build_j_matrix(g)
print("\n" + lat.dump())
print("T =", lat.cokernel())

print()
print(structure_report(g).text(), end="")
