"""Finite graphs of groups: data model, the GOG text format, validation.

An edge ``e`` with ``source`` u and ``target`` w gives two oriented edges,
``OrientedEdge(e, "from")`` with origin u and ``OrientedEdge(e, "to")`` with
origin w.  The embedding attached to an oriented edge is the one into its
origin vertex group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .oracles import (AbelianOracle, FreeOracle, GroupOracle, PresentationOracle,
                      Undecided, Unsupported, ZSemiZOracle)
from .words import (commutator, format_word, free_conjugate, inv, is_symbol,
                    mul, parse_word, substitute)

KINDS = ("elementary", "orbifold", "rigid")


class GogSyntaxError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)


class NotJSJShaped(ValueError):
    """Raised where the combinatorial structure report needs a JSJ-shaped graph."""


@dataclass(frozen=True)
class Signature:
    genus: int
    orientable: bool
    boundary: int

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary
        return 2 - self.genus - self.boundary

    @property
    def free_rank(self) -> int:
        if self.orientable:
            return 2 * self.genus + self.boundary - 1
        return self.genus + self.boundary - 1

    def __str__(self):
        return f"{self.genus},{'o' if self.orientable else 'n'},{self.boundary}"


@dataclass(frozen=True)
class Vertex:
    id: str
    oracle: GroupOracle
    kind: str | None = None            # elementary / orbifold / rigid, None if unlabeled
    center: str | None = None          # declared "finite" / "infinite"
    signature: Signature | None = None
    boundary: tuple = ()               # boundary words of an orbifold vertex
    mcg: str | None = None             # declared "finite" / "infinite" / "unknown"

    @property
    def gens(self):
        return self.oracle.gens


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    oracle: GroupOracle
    emb_from: tuple
    emb_to: tuple
    center: str | None = None

    @property
    def gens(self):
        return self.oracle.gens


class OrientedEdge(NamedTuple):
    edge: str
    end: str  # "from" or "to": which endpoint is the origin

    @property
    def bar(self) -> "OrientedEdge":
        return OrientedEdge(self.edge, "to" if self.end == "from" else "from")

    def __str__(self):
        return f"{self.edge}@{self.end}"


@dataclass(frozen=True)
class GraphOfGroups:
    name: str
    vertices: tuple
    edges: tuple
    _vindex: dict = field(default=None, compare=False, repr=False)
    _eindex: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_vindex", {v.id: v for v in self.vertices})
        object.__setattr__(self, "_eindex", {e.id: e for e in self.edges})

    def vertex(self, vid) -> Vertex:
        return self._vindex[vid]

    def edge(self, eid) -> Edge:
        return self._eindex[eid]

    def origin(self, f: OrientedEdge) -> str:
        e = self.edge(f.edge)
        return e.source if f.end == "from" else e.target

    def terminus(self, f: OrientedEdge) -> str:
        return self.origin(f.bar)

    def embedding(self, f: OrientedEdge) -> tuple:
        """Images of the edge generators in the origin vertex group."""
        e = self.edge(f.edge)
        return e.emb_from if f.end == "from" else e.emb_to

    def oriented_edges(self) -> list[OrientedEdge]:
        return [OrientedEdge(e.id, end) for e in sorted(self.edges, key=lambda e: e.id)
                for end in ("from", "to")]

    def outgoing(self, vid) -> list[OrientedEdge]:
        """E_v: oriented edges with origin v (a loop contributes both)."""
        return [f for f in self.oriented_edges() if self.origin(f) == vid]

    def valence(self, vid) -> int:
        return len(self.outgoing(vid))

    def neighbours(self, vid) -> list[str]:
        return [self.terminus(f) for f in self.outgoing(vid)]

    def vertex_ids(self) -> list[str]:
        return sorted(self._vindex)

    def owner(self, symbol) -> str | None:
        """Vertex id owning a generator symbol."""
        for v in self.vertices:
            if symbol in v.gens:
                return v.id
        return None

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        start = self.vertex_ids()[0]
        seen, todo = {start}, [start]
        while todo:
            for w in self.neighbours(todo.pop()):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)


# -- GOG text format ------------------------------------------------------

_VERTEX_KEYS = ("class", "group", "gens", "center", "signature", "boundary", "mcg")
_EDGE_KEYS = ("from", "to", "group", "gens", "center", "emb_from", "emb_to")
_ORACLE = re.compile(r"^(free|abelian|zsemiz|presentation)\((.*)\)$", re.S)


def _split_attributes(rest: str, keys, lineno: int, offset: int) -> dict:
    pattern = re.compile(r"(?:^|\s)(" + "|".join(keys) + r"|[A-Za-z_]+)=")
    matches = list(pattern.finditer(rest))
    if rest.strip() and (not matches or rest[:matches[0].start()].strip()):
        raise GogSyntaxError(f"expected key=value, got {rest.strip().split()[0]!r}",
                             lineno, offset + 1)
    attrs = {}
    for i, m in enumerate(matches):
        key = m.group(1)
        if key not in keys:
            raise GogSyntaxError(f"unknown attribute {key!r}", lineno, offset + m.start(1) + 1)
        if key in attrs:
            raise GogSyntaxError(f"repeated attribute {key!r}", lineno, offset + m.start(1) + 1)
        end = matches[i + 1].start() if i + 1 < len(matches) else len(rest)
        attrs[key] = (rest[m.end():end].strip(), offset + m.end(1) + 2)
    return attrs


def _default_gens(owner: str, n: int) -> list[str]:
    return [f"{owner}_{i + 1}" for i in range(n)]


def parse_oracle(spec: str, owner: str, gens: list[str] | None = None) -> GroupOracle:
    """Build an oracle from ``free(2)``, ``abelian(0,2)``, ``zsemiz(1;-1)``,
    ``presentation(a,b;a b a^-1 b^-1)``."""
    m = _ORACLE.match(spec.strip())
    if not m:
        raise ValueError(f"unknown oracle spec {spec!r}")
    kind, body = m.group(1), m.group(2).strip()
    if kind == "free":
        rank = int(body)
        if rank < 0:
            raise ValueError("free rank must be >= 0")
        return FreeOracle(gens or _default_gens(owner, rank)) if (gens is None or len(gens) == rank) \
            else _count_error(kind, rank, gens)
    if kind == "abelian":
        orders = [int(x) for x in body.split(",")] if body else []
        if gens is not None and len(gens) != len(orders):
            _count_error(kind, len(orders), gens)
        return AbelianOracle(gens or _default_gens(owner, len(orders)), orders)
    if kind == "zsemiz":
        k_text, _, entries = body.partition(";")
        k = int(k_text)
        vals = [int(x) for x in entries.replace("[", "").replace("]", "").split(",") if x.strip()]
        if len(vals) != k * k:
            raise ValueError(f"zsemiz({k}) needs {k * k} matrix entries, got {len(vals)}")
        matrix = [vals[i * k:(i + 1) * k] for i in range(k)]
        if gens is None:
            gens = _default_gens(owner, k) + [f"{owner}_t"]
        elif len(gens) != k + 1:
            _count_error(kind, k + 1, gens)
        return ZSemiZOracle(gens, matrix)
    gens_text, _, rels_text = body.partition(";")
    pgens = [g.strip() for g in gens_text.split(",") if g.strip()]
    if gens is not None and list(gens) != pgens:
        raise ValueError("gens= must match the generators of presentation(...)")
    rels = [parse_word(r) for r in rels_text.split(",") if r.strip()]
    for r in rels:
        for s, _ in r:
            if s not in pgens:
                raise ValueError(f"relator uses unknown generator {s!r}")
    return PresentationOracle(pgens, rels)


def _count_error(kind, n, gens):
    raise ValueError(f"{kind} group needs {n} generator names, got {len(gens)}")


def _parse_words(text: str, sep: str) -> tuple:
    if not text.strip():
        return ()
    return tuple(parse_word(part) for part in text.split(sep))


def _parse_signature(text: str) -> Signature:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or parts[1] not in ("o", "n"):
        raise ValueError(f"signature must be <genus>,<o|n>,<boundary>, got {text!r}")
    sig = Signature(int(parts[0]), parts[1] == "o", int(parts[2]))
    if sig.genus < 0 or sig.boundary < 1 or (not sig.orientable and sig.genus < 1):
        raise ValueError(f"invalid surface signature {text!r}")
    return sig


def parse_graph(text: str) -> GraphOfGroups:
    name = None
    vertices, edges = [], []
    seen_ids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        head, _, rest = line.partition(" ")
        offset = indent + len(head) + 1
        if name is None:
            if head != "graph" or not rest.strip() or not is_symbol(rest.strip()):
                raise GogSyntaxError("first line must be 'graph <name>'", lineno, indent + 1)
            name = rest.strip()
            continue
        if head not in ("vertex", "edge"):
            raise GogSyntaxError(f"expected 'vertex' or 'edge', got {head!r}", lineno, indent + 1)
        ident, _, attr_text = rest.strip().partition(" ")
        if not is_symbol(ident):
            raise GogSyntaxError(f"bad identifier {ident!r}", lineno, offset + 1)
        if ident in seen_ids:
            raise GogSyntaxError(f"duplicate id {ident!r}", lineno, offset + 1)
        seen_ids.add(ident)
        attr_offset = offset + len(rest) - len(rest.lstrip()) + len(ident) + 1
        keys = _VERTEX_KEYS if head == "vertex" else _EDGE_KEYS
        attrs = _split_attributes(attr_text, keys, lineno, attr_offset)

        def get(key, required=False):
            if key not in attrs:
                if required:
                    raise GogSyntaxError(f"missing {key}= on {head} {ident}", lineno, indent + 1)
                return None
            return attrs[key][0]

        def guard(key, fn):
            try:
                return fn(get(key))
            except GogSyntaxError:
                raise
            except (ValueError, KeyError) as exc:
                raise GogSyntaxError(str(exc), lineno, attrs[key][1] if key in attrs else None) from None

        gens = guard("gens", lambda t: None if t is None else [g.strip() for g in t.split(",") if g.strip()])
        if gens is not None and not all(is_symbol(g) for g in gens):
            raise GogSyntaxError("generator names must match [A-Za-z0-9_]+", lineno, attrs["gens"][1])
        oracle = guard("group", lambda t: parse_oracle(t, ident, gens) if t is not None else _missing("group"))
        center = get("center")
        if center not in (None, "finite", "infinite"):
            raise GogSyntaxError("center must be finite or infinite", lineno, attrs["center"][1])

        if head == "vertex":
            kind = get("class")
            if kind is not None and kind not in KINDS:
                raise GogSyntaxError(f"unknown vertex class {kind!r}", lineno, attrs["class"][1])
            sig = guard("signature", lambda t: None if t is None else _parse_signature(t))
            boundary = guard("boundary", lambda t: () if t is None else _parse_words(t, ";"))
            mcg = get("mcg")
            if mcg not in (None, "finite", "infinite", "unknown"):
                raise GogSyntaxError("mcg must be finite, infinite or unknown", lineno, attrs["mcg"][1])
            if kind == "orbifold" and sig is None:
                raise GogSyntaxError(f"orbifold vertex {ident} needs signature=", lineno, indent + 1)
            for w in boundary:
                _check_symbols(w, oracle.gens, lineno, attrs["boundary"][1], f"vertex {ident}")
            vertices.append(Vertex(ident, oracle, kind, center, sig, boundary, mcg))
        else:
            source, target = get("from", True), get("to", True)
            emb_from = guard("emb_from", lambda t: _parse_words(t or "", ","))
            emb_to = guard("emb_to", lambda t: _parse_words(t or "", ","))
            for emb, key in ((emb_from, "emb_from"), (emb_to, "emb_to")):
                if len(emb) != len(oracle.gens):
                    raise GogSyntaxError(f"{key} needs {len(oracle.gens)} words, got {len(emb)}",
                                         lineno, attrs[key][1] if key in attrs else None)
            edges.append((lineno, Edge(ident, source, target, oracle, emb_from, emb_to, center),
                          attrs))
    if name is None:
        raise GogSyntaxError("empty graph description", 1, 1)

    vids = {v.id for v in vertices}
    owners = {}
    for v in vertices:
        for g in v.gens:
            if g in owners:
                raise GogSyntaxError(f"generator {g!r} used by both {owners[g]} and {v.id}")
            owners[g] = v.id
    final_edges = []
    for lineno, e, attrs in edges:
        for key, vid in (("from", e.source), ("to", e.target)):
            if vid not in vids:
                raise GogSyntaxError(f"edge {e.id} refers to missing vertex {vid!r}",
                                     lineno, attrs[key][1])
        for g in e.gens:
            if g in owners:
                raise GogSyntaxError(f"generator {g!r} used by both {owners[g]} and {e.id}", lineno)
            owners[g] = e.id
        src = next(v for v in vertices if v.id == e.source)
        dst = next(v for v in vertices if v.id == e.target)
        for w in e.emb_from:
            _check_symbols(w, src.gens, lineno, attrs["emb_from"][1], f"vertex {src.id}")
        for w in e.emb_to:
            _check_symbols(w, dst.gens, lineno, attrs["emb_to"][1], f"vertex {dst.id}")
        final_edges.append(e)
    return GraphOfGroups(name, tuple(vertices), tuple(final_edges))


def _missing(key):
    raise ValueError(f"missing {key}=")


def _check_symbols(w, allowed, lineno, column, where):
    for s, _ in w:
        if s not in allowed:
            raise GogSyntaxError(f"{s!r} is not a generator of {where}", lineno, column)


def serialize_graph(g: GraphOfGroups) -> str:
    lines = [f"graph {g.name}"]
    for v in g.vertices:
        parts = [f"vertex {v.id}"]
        if v.kind:
            parts.append(f"class={v.kind}")
        parts.append(f"group={v.oracle.spec()}")
        if v.oracle.kind != "presentation":
            parts.append(f"gens={','.join(v.gens)}")
        if v.center:
            parts.append(f"center={v.center}")
        if v.signature:
            parts.append(f"signature={v.signature}")
        if v.boundary:
            parts.append("boundary=" + ";".join(format_word(w) for w in v.boundary))
        if v.mcg:
            parts.append(f"mcg={v.mcg}")
        lines.append(" ".join(parts))
    for e in g.edges:
        parts = [f"edge {e.id}", f"from={e.source}", f"to={e.target}", f"group={e.oracle.spec()}"]
        if e.oracle.kind != "presentation":
            parts.append(f"gens={','.join(e.gens)}")
        if e.center:
            parts.append(f"center={e.center}")
        parts.append("emb_from=" + ",".join(format_word(w) for w in e.emb_from))
        parts.append("emb_to=" + ",".join(format_word(w) for w in e.emb_to))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


# -- validation -----------------------------------------------------------

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list
    minimal: str = UNKNOWN          # pass / fail / unknown
    mapping_torus: bool | None = None

    @property
    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def status(self, name) -> str:
        return next(c.status for c in self.checks if c.name == name)

    def __str__(self):
        return "\n".join(f"{c.name}: {c.status}" + (f" ({c.detail})" if c.detail else "")
                         for c in self.checks)


def _infinite_cyclic(oracle) -> bool:
    return (oracle.kind == "free" and len(oracle.gens) == 1) or (
        oracle.kind == "abelian" and oracle.orders == (0,))


def _tri(fn):
    try:
        return fn()
    except (Undecided, Unsupported):
        return None


def _combine(statuses) -> str:
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if UNKNOWN in statuses:
        return UNKNOWN
    return PASS


def computed_center_infinite(oracle: GroupOracle) -> bool | None:
    try:
        return oracle.center().free_rank > 0
    except Unsupported:
        return None


def minimality(g: GraphOfGroups) -> tuple[str, str]:
    statuses, notes = [], []
    for vid in g.vertex_ids():
        out = g.outgoing(vid)
        if len(out) != 1:
            continue
        f = out[0]
        whole = _tri(lambda: g.vertex(vid).oracle.is_whole_group(g.embedding(f)))
        if whole is True:
            statuses.append(FAIL)
            notes.append(f"terminal vertex {vid} equals the image of {f.edge}")
        elif whole is None:
            statuses.append(UNKNOWN)
            notes.append(f"cannot decide whether {f.edge} is onto {vid}")
        else:
            statuses.append(PASS)
    return _combine(statuses), "; ".join(notes)


def is_mapping_torus(g: GraphOfGroups) -> bool | None:
    if not g.edges or len(g.edges) != len(g.vertices) or not g.is_connected():
        return False
    if any(g.valence(v) != 2 for v in g.vertex_ids()):
        return False
    verdicts = [_tri(lambda f=f: g.vertex(g.origin(f)).oracle.is_whole_group(g.embedding(f)))
                for f in g.oriented_edges()]
    if any(v is False for v in verdicts):
        return False
    if all(v is True for v in verdicts):
        return True
    return None


def validate(g: GraphOfGroups) -> ValidationReport:
    checks = [Check("connected", PASS if g.is_connected() else FAIL)]

    emb = []
    for e in g.edges:
        for f in (OrientedEdge(e.id, "from"), OrientedEdge(e.id, "to")):
            vo = g.vertex(g.origin(f)).oracle
            images = dict(zip(e.gens, g.embedding(f)))
            for rel in e.oracle.relators():
                ok = _tri(lambda: vo.is_identity(substitute(rel, images)))
                emb.append(PASS if ok else (UNKNOWN if ok is None else FAIL))
            if _infinite_cyclic(e.oracle):
                inf = _tri(lambda: vo.has_infinite_order(g.embedding(f)[0]))
                emb.append(PASS if inf else (UNKNOWN if inf is None else FAIL))
    checks.append(Check("embeddings", _combine(emb)))

    flags = []
    notes = []
    for v in g.vertices:
        if v.center and v.kind in ("elementary", None):
            c = computed_center_infinite(v.oracle)
            if c is not None and c != (v.center == "infinite"):
                flags.append(FAIL)
                notes.append(f"vertex {v.id} declared center={v.center}")
    for e in g.edges:
        if e.center:
            c = computed_center_infinite(e.oracle)
            if c is not None and c != (e.center == "infinite"):
                flags.append(FAIL)
                notes.append(f"edge {e.id} declared center={e.center}")
    checks.append(Check("center-flags", _combine(flags), "; ".join(notes)))

    orb = []
    notes = []
    for v in g.vertices:
        if v.kind != "orbifold":
            continue
        sig = v.signature
        if sig.euler_characteristic >= 0:
            orb.append(FAIL)
            notes.append(f"{v.id}: euler characteristic {sig.euler_characteristic} >= 0")
            continue
        if v.mcg is None:
            if v.oracle.kind != "free" or len(v.gens) != sig.free_rank:
                orb.append(FAIL)
                notes.append(f"{v.id}: needs free({sig.free_rank}) for signature {sig}")
                continue
            if len(v.boundary) != sig.boundary or not all(v.boundary):
                orb.append(FAIL)
                notes.append(f"{v.id}: needs {sig.boundary} nontrivial boundary words")
                continue
            if sig.orientable:
                gens = v.gens
                prod = ()
                for i in range(sig.genus):
                    prod = mul(prod, commutator(((gens[2 * i], 1),), ((gens[2 * i + 1], 1),)))
                if mul(*v.boundary) != prod:
                    orb.append(FAIL)
                    notes.append(f"{v.id}: boundary product is not the commutator product")
                    continue
            for f in g.outgoing(v.id):
                img = g.embedding(f)
                if len(img) == 1 and not any(free_conjugate(img[0], b) or free_conjugate(img[0], inv(b))
                                             for b in v.boundary):
                    orb.append(FAIL)
                    notes.append(f"{v.id}: edge {f.edge} is not attached along a boundary word")
                    break
            else:
                orb.append(PASS)
        else:
            orb.append(PASS)
    checks.append(Check("orbifold-signatures", _combine(orb), "; ".join(notes)))

    minimal, note = minimality(g)
    checks.append(Check("minimal", minimal, note))
    mt = is_mapping_torus(g)
    checks.append(Check("mapping-torus", {False: PASS, True: FAIL, None: UNKNOWN}[mt],
                        {False: "no", True: "yes", None: "undecided"}[mt]))
    return ValidationReport(checks, minimal, mt)


# -- JSJ edge classes -----------------------------------------------------

@dataclass(frozen=True)
class EdgePartition:
    e2: tuple
    e3: tuple
    e2_inf: tuple
    e3_inf: tuple
    v1: tuple
    v1_inf: tuple
    v2: tuple
    v3: tuple

    @property
    def e_inf(self):
        return tuple(sorted(self.e2_inf + self.e3_inf))


def elementary_end(g: GraphOfGroups, e: Edge) -> str:
    return e.source if g.vertex(e.source).kind == "elementary" else e.target


def center_is_infinite(declared: str | None, oracle: GroupOracle, what: str) -> bool:
    if declared is not None:
        return declared == "infinite"
    c = computed_center_infinite(oracle)
    if c is None:
        raise NotJSJShaped(f"{what} needs a center= flag")
    return c


def classify_edges(g: GraphOfGroups) -> EdgePartition:
    for v in g.vertices:
        if v.kind is None:
            raise NotJSJShaped(f"vertex {v.id} has no class label")
    e2, e3, e2i, e3i = [], [], [], []
    for e in sorted(g.edges, key=lambda e: e.id):
        kinds = {g.vertex(e.source).kind, g.vertex(e.target).kind}
        if e.source == e.target or "elementary" not in kinds or kinds == {"elementary"}:
            raise NotJSJShaped(f"edge {e.id} does not join an elementary vertex to an "
                               f"orbifold or rigid vertex")
        other = (kinds - {"elementary"}).pop()
        inf = center_is_infinite(e.center, e.oracle, f"edge {e.id}")
        (e2 if other == "orbifold" else e3).append(e.id)
        if inf:
            (e2i if other == "orbifold" else e3i).append(e.id)
    by_kind = {k: tuple(sorted(v.id for v in g.vertices if v.kind == k)) for k in KINDS}
    v1_inf = tuple(v for v in by_kind["elementary"]
                   if center_is_infinite(g.vertex(v).center, g.vertex(v).oracle, f"vertex {v}"))
    return EdgePartition(tuple(e2), tuple(e3), tuple(e2i), tuple(e3i),
                         by_kind["elementary"], v1_inf, by_kind["orbifold"], by_kind["rigid"])
