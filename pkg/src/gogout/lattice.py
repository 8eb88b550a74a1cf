"""The group of twists as the cokernel of an integer matrix.

Codomain: one block per oriented edge f, the centralizer of the edge
image in G_o(f).  Domain: the centers Z(G_v) and Z(G_e).  A vertex center
element z is sent to (z, ..., z) on the blocks of edges leaving v (twisting
by z around all of them is inner), an edge center element to its two images
on the blocks of the two ends.  The group of twists is the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import snf
from .graph import FAIL, PASS, GraphOfGroups, OrientedEdge, validate
from .oracles import AbelianDescription, Undecided, Unsupported
from .presentation import center, centralizer_of_edge_image, vertex_center
from .words import format_word, substitute


class HypothesisError(Exception):
    """Minimality / not-a-mapping-torus could not be established."""


class NonAbelianBlock(Exception):
    def __init__(self, message, symbolic):
        super().__init__(message)
        self.symbolic = symbolic


@dataclass(frozen=True)
class Block:
    edge: OrientedEdge
    orders: tuple
    basis: tuple
    from_edge_center: bool
    start: int


@dataclass
class TwistLattice:
    rows: list              # (label, order) with order 0 for Z
    columns: list           # (label, order)
    matrix: list            # len(rows) x len(columns)
    blocks: list = field(default_factory=list)
    caveats: list = field(default_factory=list)

    def full_matrix(self) -> list:
        """j with a relation column d.e_i appended for every Z/d row."""
        extra = [i for i, (_, d) in enumerate(self.rows) if d]
        out = []
        for i, row in enumerate(self.matrix):
            out.append(list(row) + [self.rows[i][1] if i == k else 0 for k in extra])
        return out

    def cokernel(self) -> snf.Cokernel:
        return snf.cokernel(self.full_matrix(), len(self.rows))

    def kernel_rank(self) -> int:
        """Rank of ker j on the free part of the domain."""
        free_rows = [i for i, (_, d) in enumerate(self.rows) if d == 0]
        free_cols = [j for j, (_, d) in enumerate(self.columns) if d == 0]
        sub = [[self.matrix[i][j] for j in free_cols] for i in free_rows]
        return len(free_cols) - (snf.rank(sub) if sub and free_cols else 0)

    def dump(self) -> str:
        width = max([len(lbl) for lbl, _ in self.rows] + [4])
        head = " " * width + "  " + "  ".join(_col_label(c) for c in self.columns)
        lines = [head]
        for (lbl, d), row in zip(self.rows, self.matrix):
            cells = "  ".join(f"{x:>{len(_col_label(c))}}" for x, c in zip(row, self.columns))
            lines.append(f"{lbl:<{width}}  {cells}" + (f"   (mod {d})" if d else ""))
        return "\n".join(lines)


def _col_label(c) -> str:
    lbl, d = c
    return lbl if not d else f"{lbl}(mod {d})"


@dataclass(frozen=True)
class SymbolicTwists:
    """Generators and relations of the twist group without reduction."""

    generators: tuple
    relations: tuple
    reason: str

    def __str__(self):
        lines = [f"T = < {', '.join(self.generators)} | vertex and edge relations >"]
        lines += [f"  {r}" for r in self.relations]
        return "\n".join(lines)


def symbolic_twists(g: GraphOfGroups, reason: str) -> SymbolicTwists:
    gens = tuple(f"D[{f}]" for f in g.oriented_edges())
    rels = []
    for v in g.vertex_ids():
        out = g.outgoing(v)
        if out:
            rels.append(f"z in Z(G_{v}):  " + " ".join(f"D[{f}](z)" for f in out) + "  = 1")
    for e in sorted(g.edges, key=lambda e: e.id):
        rels.append(f"z in Z(G_{e.id}):  D[{e.id}@from](z) D[{e.id}@to](z)  = 1")
    return SymbolicTwists(gens, tuple(rels), reason)


def _coords(oracle, u, block: Block, what: str) -> list:
    try:
        y = oracle.abelian_coordinates(u, AbelianDescription(block.orders, block.basis))
    except (Undecided, Unsupported) as exc:
        raise NonAbelianBlock(f"cannot express {what} in the centralizer of {block.edge}: {exc}", None) from exc
    if y is None:
        raise ValueError(f"{what} does not lie in the centralizer of {block.edge}")
    return y


def build_j_matrix(g: GraphOfGroups) -> TwistLattice:
    """Raises NonAbelianBlock (carrying a symbolic presentation) when some
    block cannot be handled numerically."""
    try:
        return _build(g)
    except NonAbelianBlock as exc:
        if exc.symbolic is None:
            raise NonAbelianBlock(str(exc), symbolic_twists(g, str(exc))) from exc
        raise


def _build(g: GraphOfGroups) -> TwistLattice:
    blocks, rows, caveats = [], [], []
    for f in g.oriented_edges():
        c = centralizer_of_edge_image(g, f)
        if c.description is None:
            raise NonAbelianBlock(f"centralizer for {f} unavailable: {c.reason}",
                                  symbolic_twists(g, c.reason))
        d = c.description
        blocks.append(Block(f, d.orders, d.basis, c.from_edge_center, len(rows)))
        for i, (o, b) in enumerate(zip(d.orders, d.basis)):
            rows.append((f"Z({f})[{format_word(b)}]", o))
        if c.from_edge_center:
            caveats.append(f"centralizer at {f} taken as the edge center (maximal elementary edge group)")
    by_edge = {b.edge: b for b in blocks}

    columns, cols = [], []
    for v in g.vertex_ids():
        zc = vertex_center(g, v)
        if zc is None:
            raise NonAbelianBlock(f"center of G_{v} unavailable", symbolic_twists(g, f"center of G_{v}"))
        vert = g.vertex(v)
        if center(vert.oracle) is None:
            caveats.append(f"G_{v} assumed centerless")
        for o, z in zip(zc.orders, zc.basis):
            col = [0] * len(rows)
            for f in g.outgoing(v):
                b = by_edge[f]
                if b.from_edge_center:
                    raise NonAbelianBlock(f"cannot place Z(G_{v}) in the edge-center block at {f}",
                                          symbolic_twists(g, "vertex center against edge-center block"))
                for i, y in enumerate(_coords(vert.oracle, z, b, f"center element {format_word(z)}")):
                    col[b.start + i] += y
            columns.append((f"Z({v})[{format_word(z)}]", o))
            cols.append(col)

    for e in sorted(g.edges, key=lambda e: e.id):
        ec = center(e.oracle)
        if ec is None:
            raise NonAbelianBlock(f"center of G_{e.id} unavailable", symbolic_twists(g, f"center of G_{e.id}"))
        for o, z in zip(ec.orders, ec.basis):
            col = [0] * len(rows)
            for f in (OrientedEdge(e.id, "from"), OrientedEdge(e.id, "to")):
                b = by_edge[f]
                if b.from_edge_center:
                    y = _coords(e.oracle, z, Block(f, ec.orders, ec.basis, True, 0), f"edge element {format_word(z)}")
                else:
                    img = substitute(z, dict(zip(e.gens, g.embedding(f))))
                    y = _coords(g.vertex(g.origin(f)).oracle, img, b, f"image of {format_word(z)}")
                for i, k in enumerate(y):
                    col[b.start + i] += k
            columns.append((f"Z({e.id})[{format_word(z)}]", o))
            cols.append(col)

    matrix = [[c[i] for c in cols] for i in range(len(rows))]
    return TwistLattice(rows, columns, matrix, blocks, caveats)


def check_hypotheses(g: GraphOfGroups) -> None:
    rep = validate(g)
    if rep.status("minimal") != PASS:
        raise HypothesisError(f"minimality is {rep.status('minimal')}: the twist group is only "
                              f"described for minimal graphs")
    if rep.status("mapping-torus") != PASS:
        status = "a mapping torus" if rep.status("mapping-torus") == FAIL else "possibly a mapping torus"
        raise HypothesisError(f"the graph is {status}; the vertex and edge relations need not "
                              f"present the twist group there")


def twist_group_structure(g: GraphOfGroups, assume_hypotheses: bool = False) -> snf.Cokernel:
    if not assume_hypotheses:
        check_hypotheses(g)
    return build_j_matrix(g).cokernel()


@dataclass(frozen=True)
class KernelCheck:
    kernel_rank: int
    center_rank: int | None
    consistent: bool | None
    note: str = ""

    def __str__(self):
        if self.consistent is None:
            return f"ker j has rank {self.kernel_rank}; rank of Z(G) unknown ({self.note})"
        verdict = "consistent" if self.consistent else "INCONSISTENT"
        return f"ker j has rank {self.kernel_rank}, Z(G) has rank {self.center_rank}: {verdict}"


def kernel_check(g: GraphOfGroups, center_rank: int | None = None,
                 assume_hypotheses: bool = False) -> KernelCheck:
    if not assume_hypotheses:
        check_hypotheses(g)
    k = build_j_matrix(g).kernel_rank()
    note = ""
    if center_rank is None:
        if not g.edges and len(g.vertices) == 1:
            zc = vertex_center(g, g.vertices[0].id)
            center_rank = zc.free_rank if zc is not None else None
        elif g.vertices and all(v.kind is not None for v in g.vertices):
            center_rank = 0
            note = "JSJ-labelled input: hyperbolic, so Z(G) is finite"
        else:
            note = "pass the rank of Z(G) explicitly"
    consistent = None if center_rank is None else k == center_rank
    return KernelCheck(k, center_rank, consistent, note)
