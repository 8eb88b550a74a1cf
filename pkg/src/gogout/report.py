"""Counting invariants of a JSJ-labelled graph and the shape of Out(G).

V1, V2, V3 are the elementary, orbifold and rigid vertices; E2 (E3) the
edges from an elementary vertex to an orbifold (rigid) vertex.  A
superscript inf keeps the vertices and edges whose group has infinite
center.  With

    n = |E^inf| - |V1^inf|,   q = |E3^inf| - |V1^inf| + r,   s = |E2^inf| - r

Out(G) is virtually Z^q x M, where M is a product of boundary mapping class
groups of the orbifold vertices divided by a central Z^r.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graph import GraphOfGroups, OrientedEdge, Signature, classify_edges

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class Invariants:
    n: int
    r: int
    q: int
    s: int


def _e3_inf_at(g: GraphOfGroups, part, v) -> list:
    return sorted(e for e in part.e3_inf if v in (g.edge(e).source, g.edge(e).target))


def count_invariants(g: GraphOfGroups) -> Invariants:
    part = classify_edges(g)
    n = len(part.e_inf) - len(part.v1_inf)
    # vertices of V1^inf that do not reach a rigid vertex through an E3^inf edge
    r = sum(1 for v in part.v1_inf if not _e3_inf_at(g, part, v))
    q = len(part.e3_inf) - len(part.v1_inf) + r
    s = len(part.e2_inf) - r
    assert q + s == n
    return Invariants(n, r, q, s)


def build_Q(g: GraphOfGroups) -> tuple:
    """E3^inf oriented away from the elementary end, minus the smallest-id
    edge at each vertex of V1^inf."""
    part = classify_edges(g)
    dropped = set()
    for v in part.v1_inf:
        adjacent = _e3_inf_at(g, part, v)
        if adjacent:
            dropped.add(adjacent[0])
    out = []
    for eid in sorted(part.e3_inf):
        if eid in dropped:
            continue
        e = g.edge(eid)
        end = "from" if g.vertex(e.source).kind == "elementary" else "to"
        out.append(OrientedEdge(eid, end))
    return tuple(out)


def surface_mcg_infinite(sig: Signature) -> bool:
    """Is the mapping class group of this bounded hyperbolic surface infinite?"""
    if sig.euler_characteristic >= 0:
        raise ValueError(f"signature {sig} is not hyperbolic")
    if sig.boundary < 1:
        raise ValueError("a boundary component is required")
    pants = sig.orientable and sig.genus == 0 and sig.boundary == 3
    twice_punctured_projective_plane = not sig.orientable and sig.genus == 1 and sig.boundary == 2
    return not (pants or twice_punctured_projective_plane)


def mcg_boundary_extension_rank(signature: Signature | None = None,
                                cyclic_peripherals: int | None = None) -> int:
    """Rank of the central Z^b by which MCG^bd extends the mapping class group:
    the number of boundary components, or k - 1 for H = Z with k nontrivial
    peripheral subgroups."""
    if signature is not None:
        return signature.boundary
    if cyclic_peripherals is None or cyclic_peripherals < 1:
        raise ValueError("need a signature or H = Z with k >= 1 peripheral subgroups")
    return cyclic_peripherals - 1


def _vertex_mcg(v) -> str:
    if v.mcg is not None:
        return {"infinite": YES, "finite": NO}.get(v.mcg, UNKNOWN)
    if v.signature is None:
        return UNKNOWN
    return YES if surface_mcg_infinite(v.signature) else NO


def out_infinite(g: GraphOfGroups) -> str:
    inv = count_invariants(g)
    if inv.n > 0:
        return YES
    verdicts = [_vertex_mcg(g.vertex(v)) for v in classify_edges(g).v2]
    if YES in verdicts:
        return YES
    return UNKNOWN if UNKNOWN in verdicts else NO


@dataclass
class OutReport:
    name: str
    n: int
    q: int
    r: int
    s: int
    Q: tuple
    out_infinite: str
    orbifolds: list            # (vertex id, b_v)
    rigid_everywhere: bool
    decomposition: str
    caveats: list = field(default_factory=list)

    def text(self) -> str:
        q_text = ", ".join(str(f) for f in self.Q) or "(empty)"
        lines = [
            f"graph {self.name}",
            f"n = {self.n}  q = {self.q}  r = {self.r}  s = {self.s}",
            f"Q = {q_text}",
            f"out_infinite = {self.out_infinite}",
            self.decomposition,
            f"Z_r rank {self.r}, Z_s rank {self.s}",
        ]
        if self.orbifolds:
            lines.append("orbifold vertices: " + ", ".join(f"{v} (b = {b})" for v, b in self.orbifolds))
        if self.rigid_everywhere:
            lines.append("every elementary vertex with infinite center touches a rigid vertex: "
                         "r = 0 and M is the full product")
        lines.extend(f"caveat: {c}" for c in self.caveats)
        return "\n".join(lines) + "\n"

    def machine(self) -> str:
        doc = {
            "graph": self.name, "n": self.n, "q": self.q, "r": self.r, "s": self.s,
            "Q": [str(f) for f in self.Q], "out_infinite": self.out_infinite,
            "orbifolds": {v: b for v, b in self.orbifolds},
            "rigid_everywhere": self.rigid_everywhere,
            "decomposition": self.decomposition, "caveats": list(self.caveats),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _decomposition(q: int, r: int, orbifolds) -> str:
    head = f"Out(G) is virtually Z^{q} x M"
    if not orbifolds:
        return head + ", M trivial product (no orbifold vertices)"
    factors = " x ".join(f"MCG^bd({v})" for v, _ in orbifolds)
    return head + f", M = (prod_{len(orbifolds)} MCG^bd) / Z^{r} = ({factors}) / Z^{r}"


def _has_torsion(oracle) -> bool:
    if oracle.kind == "abelian":
        return any(d > 1 for d in oracle.orders)
    return oracle.kind == "presentation"


def structure_report(g: GraphOfGroups) -> OutReport:
    part = classify_edges(g)
    inv = count_invariants(g)
    Q = build_Q(g)
    assert len(Q) == inv.q
    orbifolds = []
    caveats = ["statements hold up to finite index (Out_0, Out_1, Out_2 are not computed)"]
    for v in part.v2:
        vert = g.vertex(v)
        if vert.signature is not None:
            orbifolds.append((v, mcg_boundary_extension_rank(vert.signature)))
        else:
            orbifolds.append((v, len(g.outgoing(v))))
            caveats.append(f"{v} has no signature; b taken as its valence")
        if vert.mcg == "unknown":
            caveats.append(f"mapping class group of {v} declared unknown")
    rigid_everywhere = bool(part.v1_inf) and all(
        any(g.vertex(w).kind == "rigid" for w in g.neighbours(v)) for v in part.v1_inf)
    if any(_has_torsion(v.oracle) for v in g.vertices) or any(
            v.center == "finite" for v in g.vertices if v.kind == "elementary"):
        caveats.append("torsion present: the extensions need not be central")
    return OutReport(g.name or "", inv.n, inv.q, inv.r, inv.s, Q, out_infinite(g), orbifolds,
                     rigid_everywhere, _decomposition(inv.q, inv.r, orbifolds), caveats)
