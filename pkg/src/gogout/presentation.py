"""Presentation of pi_1 of a graph of groups and its word problem.

Words over the presentation are pushed into the path group based at the
root of the maximal subtree: a vertex generator x of G_v becomes the loop
p_v x p_v^-1, an edge letter t_e becomes p_w e p_u^-1.  In a path word the
letter for an oriented edge f sits between G_t(f) on its left and G_o(f) on
its right, and the pinch rule is

    f . alpha_f(y) . fbar  ->  alpha_fbar(y)

where alpha_f embeds the edge group into the origin of f.  A path word
without pinches and with at least one edge letter is nontrivial, so the
stack reduction below decides equality whenever the vertex oracles decide
edge-subgroup membership.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import GraphOfGroups, OrientedEdge
from .oracles import TRIVIAL, AbelianDescription, Undecided, Unsupported
from .words import IDENTITY, Word, inv, mul, power, substitute

YES, NO, UNKNOWN = "yes", "no", "unknown"


def maximal_subtree(g: GraphOfGroups) -> frozenset:
    """Breadth-first spanning tree from the smallest vertex id; among the
    edges leaving a vertex, smaller edge ids are tried first."""
    ids = g.vertex_ids()
    if not ids:
        return frozenset()
    seen = {ids[0]}
    queue = deque([ids[0]])
    tree = set()
    while queue:
        v = queue.popleft()
        for f in g.outgoing(v):
            w = g.terminus(f)
            if w not in seen:
                seen.add(w)
                tree.add(f.edge)
                queue.append(w)
    return frozenset(tree)


@dataclass(frozen=True)
class FundamentalPresentation:
    graph: GraphOfGroups
    subtree: frozenset
    base: str
    edge_letters: dict              # non-tree edge id -> letter symbol
    generators: tuple
    relators: tuple
    paths: dict = field(repr=False)  # vertex id -> list of oriented edges from the base

    @property
    def letter_edges(self) -> dict:
        return {t: e for e, t in self.edge_letters.items()}

    def vertex_of(self, symbol) -> str | None:
        return self.graph.owner(symbol)

    def loop_of_generator(self, symbol) -> list:
        """Path-group loop (tokens) representing one presentation generator."""
        if symbol in self.letter_edges:
            f = OrientedEdge(self.letter_edges[symbol], "from")
            g = self.graph
            return (_path_tokens(self.paths[g.terminus(f)]) + [("e", f)]
                    + _path_tokens(_reverse(self.paths[g.origin(f)])))
        v = self.vertex_of(symbol)
        if v is None:
            raise KeyError(f"{symbol!r} is not a generator of the presentation")
        return (_path_tokens(self.paths[v]) + [("v", v, ((symbol, 1),))]
                + _path_tokens(_reverse(self.paths[v])))


def _reverse(path):
    return [f.bar for f in reversed(path)]


def _path_tokens(path):
    return [("e", f) for f in path]


def _tree_paths(g: GraphOfGroups, base: str, subtree) -> dict:
    paths = {base: []}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for f in g.outgoing(v):
            if f.edge not in subtree:
                continue
            w = g.terminus(f)
            if w not in paths:
                # the letter reaching w has w on its right, i.e. origin w
                paths[w] = paths[v] + [f.bar]
                queue.append(w)
    return paths


def _letter_name(edge_id, taken) -> str:
    name = f"t_{edge_id}"
    while name in taken:
        name += "_"
    return name


def fundamental_presentation(g: GraphOfGroups, subtree=None) -> FundamentalPresentation:
    if subtree is None:
        subtree = maximal_subtree(g)
    subtree = frozenset(subtree)
    base = g.vertex_ids()[0]
    taken = {s for v in g.vertices for s in v.gens} | {s for e in g.edges for s in e.gens}
    letters = {}
    for e in sorted(g.edges, key=lambda e: e.id):
        if e.id not in subtree:
            letters[e.id] = _letter_name(e.id, taken)
            taken.add(letters[e.id])
    gens = tuple(s for v in sorted(g.vertices, key=lambda v: v.id) for s in v.gens) + tuple(letters.values())
    rels = []
    for v in sorted(g.vertices, key=lambda v: v.id):
        rels.extend(v.oracle.relators())
    for e in sorted(g.edges, key=lambda e: e.id):
        for a, w in zip(e.emb_from, e.emb_to):
            if e.id in subtree:
                rels.append(mul(a, inv(w)))
            else:
                t = ((letters[e.id], 1),)
                rels.append(mul(t, a, inv(t), inv(w)))
    return FundamentalPresentation(g, subtree, base, letters, gens, tuple(rels),
                                   _tree_paths(g, base, subtree))


# -- path reduction -------------------------------------------------------

class PathWord:
    """Stack-reduced path word g0 f1 g1 ... fn gn (a loop at the base)."""

    def __init__(self, p: FundamentalPresentation, start: str | None = None):
        self.p = p
        self.start = p.base if start is None else start
        self.letters: list = []
        self.syllables: list = [IDENTITY]

    @property
    def current(self) -> str:
        return self.p.graph.origin(self.letters[-1]) if self.letters else self.start

    def _oracle(self, vid):
        return self.p.graph.vertex(vid).oracle

    def push_vertex(self, vid, w: Word):
        if vid != self.current:
            raise ValueError(f"syllable at {vid} cannot follow vertex {self.current}")
        o = self._oracle(vid)
        self.syllables[-1] = o.normalize(mul(self.syllables[-1], w))

    def push_edge(self, f: OrientedEdge):
        g = self.p.graph
        if g.terminus(f) != self.current:
            raise ValueError(f"edge {f} does not start at {self.current}")
        if self.letters and self.letters[-1] == f.bar:
            h = self.letters[-1]
            vo = self._oracle(g.origin(h))
            y = vo.subgroup_coordinates(self.syllables[-1], g.embedding(h))
            if y is not None:
                image = mul(*[power(a, k) for a, k in zip(g.embedding(h.bar), y)])
                self.letters.pop()
                self.syllables.pop()
                below = self._oracle(g.origin(h.bar))
                self.syllables[-1] = below.normalize(mul(self.syllables[-1], image))
                return
        self.letters.append(f)
        self.syllables.append(IDENTITY)

    def push(self, token):
        if token[0] == "e":
            self.push_edge(token[1])
        else:
            self.push_vertex(token[1], token[2])

    @property
    def has_letters(self) -> bool:
        return bool(self.letters)

    def to_word(self) -> Word:
        out = [self.syllables[0]]
        for f, s in zip(self.letters, self.syllables[1:]):
            if f.edge in self.p.edge_letters:
                out.append(((self.p.edge_letters[f.edge], 1 if f.end == "from" else -1),))
            out.append(s)
        return mul(*out)


def to_path(p: FundamentalPresentation, w: Word) -> PathWord:
    pw = PathWord(p)
    _push_word(pw, p, w)
    return pw


def _push_word(pw: PathWord, p: FundamentalPresentation, w: Word):
    for sym, exp in w:
        loop = p.loop_of_generator(sym)
        if exp < 0:
            loop = _invert_tokens(loop)
        for _ in range(abs(exp)):
            for tok in loop:
                pw.push(tok)


def vertex_syllable(p: FundamentalPresentation, w: Word, vid) -> Word | None:
    """y in G_v with w = p_v y p_v^-1, or None when w is not of that form."""
    pw = PathWord(p, start=vid)
    for tok in _path_tokens(_reverse(p.paths[vid])):
        pw.push(tok)
    _push_word(pw, p, w)
    for tok in _path_tokens(p.paths[vid]):
        pw.push(tok)
    return None if pw.has_letters else pw.syllables[0]


def _invert_tokens(tokens):
    out = []
    for tok in reversed(tokens):
        if tok[0] == "e":
            out.append(("e", tok[1].bar))
        else:
            out.append(("v", tok[1], inv(tok[2])))
    return out


def normal_form(g: GraphOfGroups, p: FundamentalPresentation, w: Word) -> Word:
    """Pinch-free representative of w; empty iff w is the identity (for
    exact vertex oracles).  Raises Undecided or Unsupported otherwise."""
    return to_path(p, w).to_word()


def canonical_form(p: FundamentalPresentation, w: Word) -> tuple:
    """Unique key for the element w: the reduced letter sequence with every
    syllable but the first replaced by a fixed coset representative.
    Raises Unsupported when a vertex oracle has no coset representatives."""
    pw = to_path(p, w)
    g = p.graph
    for i in range(len(pw.letters), 0, -1):
        f = pw.letters[i - 1]
        images = g.embedding(f)
        h, pw.syllables[i] = pw._oracle(g.origin(f)).coset_split(pw.syllables[i], images)
        if h:
            y = pw._oracle(g.origin(f)).subgroup_coordinates(h, images)
            moved = mul(*[power(a, k) for a, k in zip(g.embedding(f.bar), y)])
            left = pw._oracle(g.terminus(f))
            pw.syllables[i - 1] = left.normalize(mul(pw.syllables[i - 1], moved))
    return tuple(pw.letters), tuple(pw.syllables)


def is_identity(g, p, w: Word) -> str:
    try:
        pw = to_path(p, w)
        if pw.has_letters:
            return NO
        return YES if p.graph.vertex(p.base).oracle.is_identity(pw.syllables[0]) else NO
    except (Undecided, Unsupported):
        return UNKNOWN


def words_equal(g, p, w1: Word, w2: Word) -> str:
    return is_identity(g, p, mul(w1, inv(w2)))


# -- centers and centralizers ---------------------------------------------

def center(oracle) -> AbelianDescription | None:
    try:
        return oracle.center()
    except Unsupported:
        return None


def vertex_center(g: GraphOfGroups, vid) -> AbelianDescription | None:
    """Z(G_v); rigid and orbifold vertices without a computable center are
    taken to be centerless (torsion-free JSJ reading)."""
    v = g.vertex(vid)
    c = center(v.oracle)
    if c is None and v.kind in ("rigid", "orbifold") and v.center != "infinite":
        return TRIVIAL
    return c


@dataclass(frozen=True)
class Centralizer:
    """Z_{G_o(f)}(G_f) together with how it was obtained."""

    description: AbelianDescription | None
    from_edge_center: bool = False
    reason: str = ""


def centralizer_of_edge_image(g: GraphOfGroups, f: OrientedEdge) -> Centralizer:
    v = g.vertex(g.origin(f))
    edge = g.edge(f.edge)
    images = list(g.embedding(f))
    try:
        return Centralizer(v.oracle.centralizer(images))
    except Unsupported as exc:
        reason = str(exc)
    if v.kind in ("rigid", "orbifold"):
        # edge groups are maximal elementary there, so Z_{G_v}(G_e) = Z(G_e)
        ec = center(edge.oracle)
        if ec is not None:
            sub = dict(zip(edge.gens, images))
            return Centralizer(AbelianDescription(ec.orders, tuple(substitute(b, sub) for b in ec.basis)),
                               from_edge_center=True)
        reason = f"center of edge group {edge.id} not computable"
    return Centralizer(None, reason=reason)
