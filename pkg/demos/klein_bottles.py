"""Two Klein bottle groups amalgamated over the cyclic subgroup <a>.

The bitwist by (t1, t2) conjugates each side by its own stable letter, so
it inverts a and fixes both t1 and t2.
"""

from importlib import resources

from gogout.automorphisms import apply, bitwist, compose, identity, relator_audit
from gogout.graph import OrientedEdge, parse_graph
from gogout.lattice import twist_group_structure
from gogout.presentation import centralizer_of_edge_image, fundamental_presentation, words_equal
from gogout.words import format_word, parse_word

g = parse_graph(resources.files("gogout").joinpath("data", "klein_amalgam.gog").read_text())
p = fundamental_presentation(g)

d = bitwist(p, "e", parse_word("t1"), parse_word("t2"))
for x in p.generators:
    print(f"{x} -> {format_word(d.image(x))}")
print("relators preserved:", relator_audit(d))

w = parse_word("a1 t1 a2 t2^-1")
print(f"\n{format_word(w)} -> {format_word(apply(d, w))}")

# D is an involution: D o D fixes every generator
dd = compose(d, d)
print("D o D is the identity:", all(words_equal(g, p, dd.image(x), identity(p).image(x)) == "yes"
                                    for x in p.generators))

c = centralizer_of_edge_image(g, OrientedEdge("e", "from")).description
print("\ncentralizer of <a> in the first Klein bottle group:", ", ".join(format_word(b) for b in c.basis))
print("twist group:", twist_group_structure(g))
