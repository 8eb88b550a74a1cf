"""When is Out(G) infinite?  Four small JSJ graphs.

A flexible edge with infinite center (n > 0) gives infinitely many twists;
otherwise only the mapping class groups of the surface pieces can help,
and a pair of pants has a finite one.
"""

from importlib import resources

from gogout.graph import Signature, parse_graph
from gogout.report import count_invariants, out_infinite, surface_mcg_infinite


def load(name):
    return parse_graph(resources.files("gogout").joinpath("data", f"{name}.gog").read_text())


for name in ("rigid_elementary", "rigid_elementary_rigid", "pants_star", "pants_leaves"):
    g = load(name)
    inv = count_invariants(g)
    print(f"{name:<24} n = {inv.n}  q = {inv.q}  r = {inv.r}  s = {inv.s}  out infinite: {out_infinite(g)}")

print("\nsurfaces with finite mapping class group (genus <= 5, boundary <= 5):")
for genus in range(6):
    for orientable in (True, False):
        for b in range(1, 6):
            sig = Signature(genus, orientable, b)
            if (orientable or genus) and sig.euler_characteristic < 0 and not surface_mcg_infinite(sig):
                print(" ", sig)
