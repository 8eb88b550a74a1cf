"""Twists, bitwists and extensions of vertex automorphisms.

Every constructed automorphism comes from a substitution on the path
group: vertex generators of G_w go to beta_w(x) and the letter of an
oriented edge f goes to L_f . f . R_f.  Read back on loops at the base it
is an automorphism of pi_1, and on each vertex group it is

    x  ->  m_w . beta_w(x) . m_w^-1

for a conjugator m_w that we keep alongside the images.  Keeping (m_w,
beta_w) lets compositions and restrictions be read off without searching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graph import OrientedEdge
from .oracles import Undecided, Unsupported
from .presentation import (NO, UNKNOWN, YES, FundamentalPresentation, normal_form, vertex_syllable,
                           words_equal)
from .words import IDENTITY, Word, expand, format_word, inv, mul, parse_word, power, reduce, substitute


class AutomorphismError(ValueError):
    """A construction precondition failed or could not be certified."""


@dataclass(frozen=True)
class VertexAutomorphismData:
    v: str
    beta: dict                                  # generator of G_v -> word in G_v
    g: dict = field(default_factory=dict)       # oriented edge with origin v -> word in G_v
    beta_inverse: dict | None = None


@dataclass(frozen=True, eq=False)
class Automorphism:
    presentation: FundamentalPresentation
    images: dict
    provenance: tuple
    conjugators: dict | None = None             # vertex -> m_w
    vertex_maps: dict | None = None             # vertex -> beta_w (missing means identity)

    def image(self, symbol) -> Word:
        return self.images.get(symbol, ((symbol, 1),))

    def beta(self, vid) -> dict:
        maps = self.vertex_maps or {}
        gens = self.presentation.graph.vertex(vid).gens
        return {x: maps.get(vid, {}).get(x, ((x, 1),)) for x in gens}


def _nf(p: FundamentalPresentation, w: Word) -> Word:
    try:
        return normal_form(p.graph, p, w)
    except (Undecided, Unsupported):
        return reduce(w)


def apply(a: Automorphism, w: Word) -> Word:
    return _nf(a.presentation, substitute(w, a.images))


def identity(p: FundamentalPresentation) -> Automorphism:
    return Automorphism(p, {x: ((x, 1),) for x in p.generators}, ("identity",),
                        {v: IDENTITY for v in p.graph.vertex_ids()}, {})


def inner(p: FundamentalPresentation, m: Word) -> Automorphism:
    m = _nf(p, m)
    images = {x: _nf(p, mul(m, ((x, 1),), inv(m))) for x in p.generators}
    return Automorphism(p, images, ("inner", m), {v: m for v in p.graph.vertex_ids()}, {})


def compose(a1: Automorphism, a2: Automorphism) -> Automorphism:
    """a1 after a2."""
    p = a1.presentation
    images = {x: apply(a1, a2.image(x)) for x in p.generators}
    conj = maps = None
    if a1.conjugators is not None and a2.conjugators is not None:
        conj, maps = {}, {}
        for v in p.graph.vertex_ids():
            conj[v] = _nf(p, mul(apply(a1, a2.conjugators[v]), a1.conjugators[v]))
            b1, b2 = a1.beta(v), a2.beta(v)
            oracle = p.graph.vertex(v).oracle
            b = {x: oracle.normalize(substitute(b2[x], b1)) for x in b2}
            if any(b[x] != ((x, 1),) for x in b):
                maps[v] = b
    return Automorphism(p, images, ("composite", a1.provenance, a2.provenance), conj, maps)


def compose_all(autos) -> Automorphism:
    autos = list(autos)
    out = autos[0]
    for a in autos[1:]:
        out = compose(out, a)
    return out


def _conjugate_by(a: Automorphism, c: Word, provenance) -> Automorphism:
    """i_c o a, keeping the provenance of a."""
    p = a.presentation
    b = compose(inner(p, c), a)
    return Automorphism(p, b.images, provenance, b.conjugators, b.vertex_maps)


def _normalized(a: Automorphism, v, target: Word, provenance) -> Automorphism:
    """Compose with an inner automorphism so that the conjugator at v is target."""
    return _conjugate_by(a, mul(target, inv(a.conjugators[v])), provenance)


# -- the path-group substitution -------------------------------------------

def _from_path_map(p: FundamentalPresentation, beta: dict, letters: dict, provenance) -> Automorphism:
    """beta: vertex -> {gen: word}; letters: edge id -> (L, R) for the letter
    of (edge, "from")."""

    def letter_word(f: OrientedEdge) -> Word:
        if f.edge in p.edge_letters:
            return ((p.edge_letters[f.edge], 1 if f.end == "from" else -1),)
        return IDENTITY

    def image_of_tokens(tokens) -> Word:
        parts = []
        for tok in tokens:
            if tok[0] == "v":
                parts.append(substitute(tok[2], beta.get(tok[1], {})))
                continue
            f = tok[1]
            left, right = letters.get(f.edge, (IDENTITY, IDENTITY))
            if f.end == "to":
                left, right = inv(right), inv(left)
            parts.extend([left, letter_word(f), right])
        return mul(*parts)

    images = {x: _nf(p, image_of_tokens(p.loop_of_generator(x))) for x in p.generators}
    conj = {v: _nf(p, image_of_tokens([("e", f) for f in p.paths[v]])) for v in p.graph.vertex_ids()}
    maps = {v: dict(b) for v, b in beta.items() if b}
    return Automorphism(p, images, provenance, conj, maps)


def _oriented(p, e) -> OrientedEdge:
    if isinstance(e, OrientedEdge):
        return e
    eid, _, end = str(e).partition("@")
    return OrientedEdge(eid, end or "from")


def _in_vertex(p, vid, w: Word, what: str):
    gens = set(p.graph.vertex(vid).gens)
    bad = [s for s, _ in w if s not in gens]
    if bad:
        raise AutomorphismError(f"{what} uses {bad[0]!r}, which is not a generator of G_{vid}")


def _certify(fn, what):
    try:
        ok = fn()
    except (Undecided, Unsupported) as exc:
        raise AutomorphismError(f"cannot certify {what}: {exc}") from exc
    if not ok:
        raise AutomorphismError(f"{what} fails")


def twist(p: FundamentalPresentation, e, z: Word) -> Automorphism:
    """Twist by z around the oriented edge e near its origin v: the letter
    of e goes to e . z^-1, G_v is fixed."""
    g = p.graph
    f = _oriented(p, e)
    v = g.origin(f)
    z = reduce(z)
    _in_vertex(p, v, z, "twist element")
    oracle = g.vertex(v).oracle
    for a in g.embedding(f):
        _certify(lambda: oracle.commutes(z, a), f"centralizing check of {z} against edge image {a}")
    letters = {f.edge: (IDENTITY, inv(z)) if f.end == "from" else (z, IDENTITY)}
    a = _from_path_map(p, {}, letters, ("twist", f, z))
    return _normalized(a, v, IDENTITY, ("twist", f, z))


def bitwist(p: FundamentalPresentation, e, z: Word, z2: Word) -> Automorphism:
    """Bitwist around e with z at the from-end and z2 at the to-end.

    Conjugates G_from by z and G_to by z2 when e separates; for a loop
    the stable letter goes to z2^-1 t z.
    """
    g = p.graph
    edge = g.edge(str(e))
    fo, to = OrientedEdge(edge.id, "from"), OrientedEdge(edge.id, "to")
    z, z2 = reduce(z), reduce(z2)
    _in_vertex(p, edge.source, z, "bitwist element z")
    _in_vertex(p, edge.target, z2, "bitwist element z'")
    src, dst = g.vertex(edge.source).oracle, g.vertex(edge.target).oracle
    from_images, to_images = g.embedding(fo), g.embedding(to)
    for a, b in zip(from_images, to_images):
        try:
            y = src.subgroup_coordinates(mul(z, a, inv(z)), from_images)
        except (Undecided, Unsupported) as exc:
            raise AutomorphismError(f"cannot certify that z normalizes the edge image: {exc}") from exc
        if y is None:
            raise AutomorphismError("z does not normalize the edge image at the from-end")
        phi_b = mul(*[power(w, k) for w, k in zip(to_images, y)])
        _certify(lambda: dst.equal(mul(z2, b, inv(z2)), phi_b),
                 "same action of z and z' on the edge group")
    prov = ("bitwist", edge.id, z, z2)
    a = _from_path_map(p, {}, {edge.id: (inv(z2), z)}, prov)
    return _normalized(a, edge.source, z, prov)


def extend_vertex_automorphism(p: FundamentalPresentation, data: VertexAutomorphismData) -> Automorphism:
    g = p.graph
    v = data.v
    vert = g.vertex(v)
    oracle = vert.oracle
    beta = {x: reduce(data.beta.get(x, ((x, 1),))) for x in vert.gens}
    for x, w in beta.items():
        _in_vertex(p, v, w, f"image of {x}")
    for r in oracle.relators():
        _certify(lambda: oracle.is_identity(substitute(r, beta)), "relators of G_v under beta")
    gs = {}
    for f in g.outgoing(v):
        gf = reduce(data.g.get(f, data.g.get(f.edge, IDENTITY)))
        _in_vertex(p, v, gf, f"g_{f}")
        for a in g.embedding(f):
            _certify(lambda: oracle.equal(substitute(a, beta), mul(gf, a, inv(gf))),
                     f"compatibility beta(alpha(x)) = g alpha(x) g^-1 on {f}")
        gs[f] = gf
    letters = {}
    for f, gf in gs.items():
        left, right = letters.get(f.edge, (IDENTITY, IDENTITY))
        if f.end == "from":
            right = inv(gf)
        else:
            left = gf
        letters[f.edge] = (left, right)
    binv = tuple(sorted(data.beta_inverse.items())) if data.beta_inverse is not None else None
    prov = ("extend", v, tuple(sorted(beta.items())), tuple(sorted(gs.items())), binv)
    a = _from_path_map(p, {v: beta}, letters, prov)
    return _normalized(a, v, IDENTITY, prov)


def inverse(a: Automorphism) -> Automorphism:
    """Inverse read off the provenance (twists, bitwists, inners, extensions
    with a supplied inverse, and composites of these)."""
    p = a.presentation
    kind = a.provenance[0]
    if kind == "identity":
        return a
    if kind == "inner":
        return inner(p, inv(a.provenance[1]))
    if kind == "twist":
        return twist(p, a.provenance[1], inv(a.provenance[2]))
    if kind == "bitwist":
        return bitwist(p, a.provenance[1], inv(a.provenance[2]), inv(a.provenance[3]))
    if kind == "extend":
        if a.provenance[4] is None:
            raise AutomorphismError("extension inverse needs beta^-1")
        binv = dict(a.provenance[4])
        v = a.provenance[1]
        beta = dict(a.provenance[2])
        oracle = p.graph.vertex(v).oracle
        for x, w in beta.items():
            _certify(lambda: oracle.equal(substitute(w, binv), ((x, 1),)), "supplied beta^-1")
        g = {f: inv(substitute(gf, binv)) for f, gf in a.provenance[3]}
        return extend_vertex_automorphism(p, VertexAutomorphismData(v, binv, g, beta))
    if kind == "composite":
        raise AutomorphismError("invert the factors of a composite individually")
    raise AutomorphismError(f"no inverse recorded for {kind}")


# -- inner tests ---------------------------------------------------------

def _combine(verdicts) -> str:
    verdicts = list(verdicts)
    if NO in verdicts:
        return NO
    return UNKNOWN if UNKNOWN in verdicts else YES


def equal_with_witness(a1: Automorphism, a2: Automorphism, m: Word) -> str:
    """Is a1 = i_m o a2 on every generator?"""
    p = a1.presentation
    verdicts = []
    for x in p.generators:
        v = words_equal(p.graph, p, a1.image(x), mul(m, a2.image(x), inv(m)))
        if v == NO:
            return NO
        verdicts.append(v)
    return _combine(verdicts)


def is_inner_with_witness(a: Automorphism, m: Word) -> str:
    return equal_with_witness(a, identity(a.presentation), m)


def _reduced_words(symbols, max_length):
    letters = [(s, 1) for s in symbols] + [(s, -1) for s in symbols]
    yield IDENTITY
    frontier = [()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for c in letters:
                if w and w[-1][0] == c[0] and w[-1][1] == -c[1]:
                    continue
                nxt.append(w + (c,))
        for w in nxt:
            yield reduce(w)
        frontier = nxt


def equal_in_out(a1: Automorphism, a2: Automorphism, m: Word | None = None,
                 max_length: int = 6) -> str:
    """Tri-valued equality modulo inner automorphisms: a witness check when
    m is given, otherwise a search over witnesses of bounded length."""
    if m is not None:
        return equal_with_witness(a1, a2, m)
    p = a1.presentation
    gens = p.generators
    undecided = False
    for cand in _reduced_words(gens, max_length):
        verdict = YES
        for x in gens:
            verdict = words_equal(p.graph, p, a1.image(x), mul(cand, a2.image(x), inv(cand)))
            if verdict != YES:
                break
        if verdict == YES:
            return YES
        if verdict == UNKNOWN:
            undecided = True
    return UNKNOWN if undecided else NO


def is_inner(a: Automorphism, max_length: int = 6) -> str:
    """Bounded witness search; a "no" means no witness of that length."""
    return equal_in_out(a, identity(a.presentation), None, max_length)


# -- the relations of the twist group ----------------------------------

def _is_central(oracle, z) -> bool:
    try:
        return oracle.is_central(z)
    except (Undecided, Unsupported) as exc:
        raise AutomorphismError(f"cannot certify centrality: {exc}") from exc


def vertex_relation(p: FundamentalPresentation, v, z: Word) -> Automorphism:
    g = p.graph
    if not _is_central(g.vertex(v).oracle, z):
        raise AutomorphismError(f"{z} is not central in G_{v}")
    twists = [twist(p, f, z) for f in g.outgoing(v)]
    return compose_all(twists) if twists else identity(p)


def check_vertex_relation(p: FundamentalPresentation, v, z: Word) -> bool:
    return is_inner_with_witness(vertex_relation(p, v, z), z) == YES


def edge_relation(p: FundamentalPresentation, e, z: Word) -> tuple[Automorphism, Word]:
    """Twists by the images of z at both ends of e, and the expected witness."""
    g = p.graph
    edge = g.edge(str(e))
    if not _is_central(edge.oracle, z):
        raise AutomorphismError(f"{z} is not central in G_{edge.id}")
    fo, to = OrientedEdge(edge.id, "from"), OrientedEdge(edge.id, "to")
    za = substitute(z, dict(zip(edge.gens, g.embedding(fo))))
    zw = substitute(z, dict(zip(edge.gens, g.embedding(to))))
    a = compose(twist(p, fo, za), twist(p, to, zw))
    witness = za if edge.id in p.subtree else IDENTITY
    return a, witness


def check_edge_relation(p: FundamentalPresentation, e, z: Word) -> bool:
    a, m = edge_relation(p, e, z)
    return is_inner_with_witness(a, m) == YES


def relator_audit(a: Automorphism) -> str:
    """Does every relator of the presentation map to the identity?"""
    p = a.presentation
    return _combine(words_equal(p.graph, p, substitute(r, a.images), IDENTITY) for r in p.relators)


# -- restriction to a vertex group --------------------------------------------

def _syllable(p, w: Word, v) -> Word | None:
    try:
        return vertex_syllable(p, w, v)
    except (Undecided, Unsupported):
        return None


def rho_restriction(a: Automorphism, v, use_provenance: bool = True) -> dict | None:
    """i_m^-1 o a on the generators of G_v, or None when m cannot be read off."""
    p = a.presentation
    vert = p.graph.vertex(v)
    if use_provenance and a.conjugators is not None:
        return a.beta(v)
    images = {x: a.image(x) for x in vert.gens}
    probe = next((w for w in images.values() if _syllable(p, w, v) is None), None)
    candidates = [IDENTITY]
    if probe is not None:
        letters = expand(probe)
        candidates = [reduce(letters[:k]) for k in range(1, len(letters) + 1)]
    for m in candidates:
        out = {}
        for x, w in images.items():
            y = _syllable(p, mul(inv(m), w, m), v)
            if y is None:
                break
            out[x] = y
        else:
            return out
    return None


def vertex_maps_equal_up_to_inner(oracle, b1: dict, b2: dict, max_length: int = 4):
    """Look for g in G_v with b1(x) = g b2(x) g^-1 on every generator.

    Returns (verdict, witness); a "no" only means no witness up to max_length.
    """
    gens = list(oracle.gens)
    undecided = False
    for g in _reduced_words(gens, max_length):
        try:
            if all(oracle.equal(b1[x], mul(g, b2[x], inv(g))) for x in b1):
                return YES, g
        except (Undecided, Unsupported):
            undecided = True
    return (UNKNOWN if undecided else NO), None


# -- autospec --------------------------------------------------------------

_CALL = re.compile(r"^\s*(twist|bitwist|extend|inner)\s*\((.*)\)\s*$", re.S)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced parentheses in autospec")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError("unbalanced parentheses in autospec")
    parts.append("".join(cur))
    return parts


def parse_autospec(p: FundamentalPresentation, text: str) -> Automorphism:
    """``twist(e@from,w)``, ``bitwist(e,w,w)``, ``extend(v; x->w,... ; e:w,...)``
    and ``inner(w)`` joined by ``;``.  Terms act left to right: the
    leftmost term is applied first."""
    terms = [t for t in _split_top(text, ";") if t.strip()]
    if not terms:
        raise ValueError("empty autospec")
    autos = [_parse_term(p, t) for t in terms]
    out = autos[0]
    for a in autos[1:]:
        out = compose(a, out)
    return out


def _parse_term(p, term: str) -> Automorphism:
    m = _CALL.match(term)
    if not m:
        raise ValueError(f"cannot parse autospec term {term.strip()!r}")
    kind, body = m.group(1), m.group(2)
    g = p.graph
    if kind == "inner":
        return inner(p, parse_word(body))
    if kind == "twist":
        edge, _, word = body.partition(",")
        eid, _, end = edge.strip().partition("@")
        if end not in ("from", "to"):
            raise ValueError("twist needs <edge>@from or <edge>@to")
        g.edge(eid)
        return twist(p, OrientedEdge(eid, end), parse_word(word))
    if kind == "bitwist":
        parts = body.split(",")
        if len(parts) != 3:
            raise ValueError("bitwist needs (<edge>,<word>,<word>)")
        g.edge(parts[0].strip())
        return bitwist(p, parts[0].strip(), parse_word(parts[1]), parse_word(parts[2]))
    sections = body.split(";")
    if len(sections) not in (2, 3):
        raise ValueError("extend needs (<vertex>; <gen>-><word>,... [; <edge>:<word>,...])")
    v = sections[0].strip()
    g.vertex(v)
    beta = {}
    for item in filter(str.strip, sections[1].split(",")):
        x, arrow, w = item.partition("->")
        if not arrow:
            raise ValueError(f"expected <gen>-><word>, got {item.strip()!r}")
        beta[x.strip()] = parse_word(w)
    gs = {}
    if len(sections) == 3:
        for item in filter(str.strip, sections[2].split(",")):
            e, colon, w = item.partition(":")
            if not colon:
                raise ValueError(f"expected <edge>:<word>, got {item.strip()!r}")
            eid, _, end = e.strip().partition("@")
            edge = g.edge(eid)
            if not end:
                if edge.source == edge.target:
                    raise ValueError(f"loop edge {eid} needs @from or @to")
                end = "from" if edge.source == v else "to"
            gs[OrientedEdge(eid, end)] = parse_word(w)
    return extend_vertex_automorphism(p, VertexAutomorphismData(v, beta, gs))


def describe(a: Automorphism) -> str:
    return "\n".join(f"{x} -> {format_word(a.image(x))}" for x in a.presentation.generators)

