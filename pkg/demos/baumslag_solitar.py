"""The Baumslag-Solitar group <a, t | t a^2 t^-1 = a^3> as an HNN extension.

Shows the word problem through reduced path words and canonical forms,
and the twists of the stable letter.
"""

from importlib import resources

from gogout.automorphisms import apply, twist
from gogout.graph import parse_graph
from gogout.lattice import twist_group_structure
from gogout.presentation import canonical_form, fundamental_presentation, normal_form, words_equal
from gogout.words import format_word, parse_word

g = parse_graph(resources.files("gogout").joinpath("data", "bs23.gog").read_text())
p = fundamental_presentation(g)
print("presentation:", ", ".join(p.generators), "|", format_word(p.relators[0]))

for text in ("t_e a^2 t_e^-1 a^-3", "t_e a t_e^-1 a^-1", "a t_e a^4 t_e^-1 a^-7"):
    w = parse_word(text)
    print(f"{text:>24}  reduces to  {format_word(normal_form(g, p, w)) or '1'}")

u, v = parse_word("t_e a^2"), parse_word("a^3 t_e")
print("\nt a^2 = a^3 t:", words_equal(g, p, u, v), "| same canonical form:",
      canonical_form(p, u) == canonical_form(p, v))

# a^6 centralizes both edge images, so it twists the stable letter from either side
for end in ("e@to", "e@from"):
    d = twist(p, end, parse_word("a^6"))
    print(f"twist around {end} by a^6:  t_e -> {format_word(apply(d, parse_word('t_e')))}")

print("twist group:", twist_group_structure(g))
