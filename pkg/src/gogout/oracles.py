"""Computable groups that sit at vertices and edges.

Free groups, finitely generated abelian groups and Z^k x| Z (split by an
integer matrix) have exact word problems; :class:`PresentationOracle` only
answers within a search budget and raises :class:`Undecided` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from . import snf
from .words import (IDENTITY, Word, expand, format_word, free_cyclic_log,
                    inv, mul, power, reduce, root)

# orders of finite-order elements of GL(k, Z) stay far below this for k <= 10
MAX_MATRIX_ORDER = 1000


class Unsupported(Exception):
    """The oracle class cannot answer this question at all."""


class Undecided(Exception):
    """A bounded search ran out before reaching a verdict."""


@dataclass(frozen=True)
class AbelianDescription:
    """An abelian subgroup given by generators and their orders.

    ``orders[i] == 0`` marks an infinite cyclic factor.  The subgroup is the
    direct sum of the cyclic groups generated by ``basis``.
    """

    orders: tuple[int, ...]
    basis: tuple[Word, ...]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        finite = [d for d in self.orders if d > 1]
        if not finite:
            return ()
        diag = [[d if i == j else 0 for j in range(len(finite))] for i, d in enumerate(finite)]
        return tuple(d for d in snf.invariant_factors(diag) if d > 1)

    @property
    def trivial(self) -> bool:
        return all(d == 1 for d in self.orders)

    def __str__(self) -> str:
        return str(snf.Cokernel(self.free_rank, self.invariant_factors))


TRIVIAL = AbelianDescription((), ())


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _matvec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


class GroupOracle:
    """Common interface.  Subclasses fill in the group-specific parts."""

    kind = "abstract"
    exact = True

    def __init__(self, gens):
        self.gens = tuple(gens)

    # -- words --------------------------------------------------------
    def normalize(self, w: Word) -> Word:
        raise NotImplementedError

    def is_identity(self, w: Word) -> bool:
        return not self.normalize(w)

    def equal(self, a: Word, b: Word) -> bool:
        return self.is_identity(mul(a, inv(b)))

    def commutes(self, a: Word, b: Word) -> bool:
        return self.is_identity(mul(a, b, inv(a), inv(b)))

    def is_central(self, z: Word) -> bool:
        return all(self.commutes(z, ((g, 1),)) for g in self.gens)

    def relators(self) -> list[Word]:
        return []

    def in_group(self, w: Word) -> bool:
        return all(s in self.gens for s, _ in w)

    # -- structure ----------------------------------------------------
    def center(self) -> AbelianDescription:
        raise Unsupported(f"center not computable for {self.kind} groups")

    def centralizer(self, words) -> AbelianDescription:
        raise Unsupported(f"centralizers not computable for {self.kind} groups")

    def subgroup_coordinates(self, u: Word, images) -> list[int] | None:
        """Exponents y with u = prod images[i]^y[i], or None if u is not in
        the subgroup.  Raises Unsupported when membership is out of reach."""
        raise Unsupported(f"subgroup membership not available for {self.kind} groups")

    def abelian_coordinates(self, u: Word, desc: AbelianDescription) -> list[int] | None:
        y = self.subgroup_coordinates(u, desc.basis)
        if y is None:
            return None
        return [c % d if d else c for c, d in zip(y, desc.orders)]

    def coset_split(self, g: Word, images) -> tuple[Word, Word]:
        """(h, r) with g = h r, h in the subgroup generated by images and r
        depending only on the right coset of g."""
        if not any(self.normalize(w) for w in images):
            return IDENTITY, self.normalize(g)
        if len(self.gens) == 1 and self.kind in ("free", "abelian"):
            return self._cyclic_split(g, images)
        raise Unsupported(f"coset representatives not available for {self.kind} groups")

    def _cyclic_split(self, g, images):
        x = self.gens[0]
        order = self.orders[0] if self.kind == "abelian" else 0
        k = gcd(order, *(sum(e for _, e in w) for w in images))
        m = sum(e for _, e in g)
        r = m % k
        return self.normalize(((x, m - r),)), self.normalize(((x, r),))

    def is_whole_group(self, images) -> bool | None:
        return None

    def has_infinite_order(self, w: Word) -> bool | None:
        return None

    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()}, gens={self.gens})"

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec() and self.gens == other.gens

    def __hash__(self):
        return hash((type(self).__name__, self.spec(), self.gens))


class FreeOracle(GroupOracle):
    kind = "free"

    @property
    def rank(self) -> int:
        return len(self.gens)

    def normalize(self, w):
        return reduce(w)

    def center(self):
        if self.rank == 1:
            return AbelianDescription((0,), (((self.gens[0], 1),),))
        return TRIVIAL

    def _common_root(self, words):
        """Conjugated root generating a cyclic group containing every word,
        IDENTITY if all words are trivial, None if they generate a non-cyclic
        subgroup."""
        nontrivial = [reduce(w) for w in words if reduce(w)]
        if not nontrivial:
            return IDENTITY
        u, r, _ = root(nontrivial[0])
        rho = mul(u, r, inv(u))
        if all(free_cyclic_log(w, rho) is not None for w in nontrivial):
            return rho
        return None

    def centralizer(self, words):
        rho = self._common_root(words)
        if rho == IDENTITY:
            if self.rank <= 1:
                return self.center()
            raise Unsupported("centralizer of the trivial subgroup of a nonabelian free group is not abelian")
        if rho is None:
            return TRIVIAL
        return AbelianDescription((0,), (rho,))

    def subgroup_coordinates(self, u, images):
        u = reduce(u)
        images = list(images)
        if not images or not any(reduce(w) for w in images):
            return [0] * len(images) if not u else None
        if len(images) == 1:
            n = free_cyclic_log(u, images[0])
            return None if n is None else [n]
        rho = self._common_root(images)
        if rho is None:
            raise Unsupported("membership in non-cyclic subgroups of free groups is not implemented")
        n = free_cyclic_log(u, rho)
        if n is None:
            return None
        ks = [free_cyclic_log(w, rho) for w in images]
        return snf.solve([ks], [n])

    def is_whole_group(self, images):
        images = [reduce(w) for w in images]
        if self.rank == 0:
            return True
        if self.rank == 1:
            ks = [free_cyclic_log(w, ((self.gens[0], 1),)) for w in images]
            return gcd(*ks) == 1 if ks else False
        if sum(1 for w in images if w) < self.rank:
            return False
        if self._common_root(images) is not None:
            return False
        return None

    def has_infinite_order(self, w):
        return bool(reduce(w))

    def spec(self):
        return f"free({self.rank})"


class AbelianOracle(GroupOracle):
    """Z/d1 x ... x Z/dk with d = 0 meaning Z."""

    kind = "abelian"

    def __init__(self, gens, orders):
        super().__init__(gens)
        self.orders = tuple(int(d) for d in orders)
        if len(self.orders) != len(self.gens):
            raise ValueError("abelian oracle needs one order per generator")
        if any(d < 0 for d in self.orders):
            raise ValueError("abelian orders must be >= 0")
        self._index = {g: i for i, g in enumerate(self.gens)}

    def vector(self, w) -> tuple[int, ...]:
        v = [0] * len(self.gens)
        for s, e in w:
            v[self._index[s]] += e
        return tuple(x % d if d else x for x, d in zip(v, self.orders))

    def from_vector(self, v) -> Word:
        return tuple((g, x) for g, x in zip(self.gens, v) if x)

    def normalize(self, w):
        return self.from_vector(self.vector(w))

    def relators(self):
        rels = []
        for i, gi in enumerate(self.gens):
            if self.orders[i]:
                rels.append(((gi, self.orders[i]),))
            for gj in self.gens[i + 1:]:
                rels.append(((gi, 1), (gj, 1), (gi, -1), (gj, -1)))
        return rels

    def whole(self):
        return AbelianDescription(self.orders, tuple(((g, 1),) for g in self.gens))

    def center(self):
        return self.whole()

    def centralizer(self, words):
        return self.whole()

    def _relation_columns(self):
        n = len(self.gens)
        return [[d if i == j else 0 for i in range(n)] for j, d in enumerate(self.orders) if d]

    def subgroup_coordinates(self, u, images):
        images = list(images)
        n = len(self.gens)
        if n == 0:
            return [0] * len(images)
        cols = [list(self.vector(w)) for w in images] + self._relation_columns()
        if not cols:
            return [] if not any(self.vector(u)) else None
        a = snf.transpose(cols)
        x = snf.solve(a, list(self.vector(u)))
        return None if x is None else x[:len(images)]

    def is_whole_group(self, images):
        n = len(self.gens)
        if n == 0:
            return True
        cols = [list(self.vector(w)) for w in images] + self._relation_columns()
        if not cols:
            return False
        return snf.cokernel(snf.transpose(cols), n).trivial

    def has_infinite_order(self, w):
        return any(x and d == 0 for x, d in zip(self.vector(w), self.orders))

    def spec(self):
        return f"abelian({','.join(map(str, self.orders))})"


class ZSemiZOracle(GroupOracle):
    """Z^k x|_M Z: lattice generators x1..xk and a stable letter t with
    t x t^-1 = M x.  ``gens`` lists the k lattice generators then t."""

    kind = "zsemiz"

    def __init__(self, gens, matrix):
        super().__init__(gens)
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        k = len(self.matrix)
        if any(len(row) != k for row in self.matrix):
            raise ValueError("zsemiz matrix must be square")
        if len(self.gens) != k + 1:
            raise ValueError(f"zsemiz({k}) needs {k + 1} generators")
        if abs(snf.det(self.matrix)) != 1:
            raise ValueError("zsemiz matrix must be invertible over Z")
        self.k = k
        self._index = {g: i for i, g in enumerate(self.gens[:k])}
        self.t = self.gens[k]

    @cached_property
    def _inverse(self):
        # adjugate / det; exact because det = +-1
        k = self.k
        d = snf.det(self.matrix)
        inv_m = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                minor = [[self.matrix[r][c] for c in range(k) if c != i] for r in range(k) if r != j]
                inv_m[i][j] = (-1) ** (i + j) * snf.det(minor) * d
        return tuple(map(tuple, inv_m))

    def mpow(self, s: int):
        base = self.matrix if s >= 0 else self._inverse
        result = snf.identity(self.k)
        for _ in range(abs(s)):
            result = snf.matmul(base, result)
        return result

    @cached_property
    def matrix_order(self) -> int:
        """Order of M, or 0 if infinite (beyond MAX_MATRIX_ORDER)."""
        ident = snf.identity(self.k)
        p = snf.identity(self.k)
        for s in range(1, MAX_MATRIX_ORDER + 1):
            p = snf.matmul(self.matrix, p)
            if p == ident:
                return s
        return 0

    # elements are pairs (v, m) standing for x^v t^m
    def multiply(self, a, b):
        (v, m), (w, n) = a, b
        return (_vec_add(v, _matvec(self.mpow(m), w)), m + n)

    def inverse(self, a):
        v, m = a
        mv = _matvec(self.mpow(-m), v)
        return (tuple(-x for x in mv), -m)

    def element(self, w):
        acc = (tuple([0] * self.k), 0)
        for s, e in w:
            if s == self.t:
                acc = (acc[0], acc[1] + e)
            else:
                unit = [0] * self.k
                unit[self._index[s]] = e
                acc = self.multiply(acc, (tuple(unit), 0))
        return acc

    def to_word(self, a) -> Word:
        v, m = a
        w = [(g, x) for g, x in zip(self.gens, v) if x]
        if m:
            w.append((self.t, m))
        return tuple(w)

    def epow(self, a, n):
        if n < 0:
            a, n = self.inverse(a), -n
        acc = (tuple([0] * self.k), 0)
        for _ in range(n):
            acc = self.multiply(acc, a)
        return acc

    def normalize(self, w):
        return self.to_word(self.element(w))

    def relators(self):
        rels = []
        lat = self.gens[:self.k]
        for i, gi in enumerate(lat):
            for gj in lat[i + 1:]:
                rels.append(((gi, 1), (gj, 1), (gi, -1), (gj, -1)))
        for i, gi in enumerate(lat):
            col = tuple(self.matrix[r][i] for r in range(self.k))
            img = self.to_word((col, 0))
            rels.append(mul(((self.t, 1), (gi, 1), (self.t, -1)), inv(img)))
        return rels

    def center(self):
        ident = snf.identity(self.k)
        a = [[self.matrix[i][j] - ident[i][j] for j in range(self.k)] for i in range(self.k)]
        fixed = snf.nullspace(a, self.k) if self.k else []
        basis = [self.to_word((tuple(v), 0)) for v in fixed]
        orders = [0] * len(basis)
        if self.matrix_order:
            basis.append(((self.t, self.matrix_order),))
            orders.append(0)
        return AbelianDescription(tuple(orders), tuple(basis))

    def _centralizer_data(self, words):
        """(lattice basis L, (x0, d)) describing {(x, s) commuting with words}."""
        elems = [self.element(w) for w in words]
        ident = snf.identity(self.k)

        def system(s):
            rows, rhs = [], []
            ms = self.mpow(s)
            for u, n in elems:
                mn = self.mpow(n)
                a = [[ident[i][j] - mn[i][j] for j in range(self.k)] for i in range(self.k)]
                b = [u[i] - sum(ms[i][j] * u[j] for j in range(self.k)) for i in range(self.k)]
                rows.extend(a)
                rhs.extend(b)
            return rows, rhs

        rows, _ = system(0)
        lattice = snf.nullspace(rows, self.k) if rows else snf.identity(self.k)
        d, x0 = 0, None
        for s in range(1, MAX_MATRIX_ORDER + 1):
            rows, rhs = system(s)
            x = snf.solve(rows, rhs) if rows else [0] * self.k
            if x is not None:
                d, x0 = s, tuple(x)
                break
        return lattice, d, x0

    def centralizer(self, words):
        lattice, d, x0 = self._centralizer_data(words)
        basis = [(tuple(v), 0) for v in lattice]
        if d:
            md = self.mpow(d)
            for v in lattice:
                if tuple(_matvec(md, v)) != tuple(v):
                    raise Unsupported("centralizer is not abelian")
            basis.append((x0, d))
        return AbelianDescription(tuple([0] * len(basis)), tuple(self.to_word(b) for b in basis))

    def subgroup_coordinates(self, u, images):
        images = list(images)
        ue = self.element(u)
        elems = [self.element(w) for w in images]
        moving = [i for i, (_, m) in enumerate(elems) if m]
        if len(moving) > 1:
            raise Unsupported("membership for subgroups with several t-exponents")
        if len(moving) == 1 and len(images) > 1:
            i = moving[0]
            if not all(self.is_identity(mul(images[i], w, inv(images[i]), inv(w))) for w in images):
                raise Unsupported("membership in non-abelian subgroups of Z^k x| Z")
        y = [0] * len(images)
        if moving:
            i = moving[0]
            step = elems[i][1]
            if ue[1] % step:
                return None
            y[i] = ue[1] // step
            ue = self.multiply(self.epow(elems[i], -y[i]), ue)
        if ue[1]:
            return None
        lat = [j for j in range(len(images)) if j not in moving]
        if not lat:
            return y if not any(ue[0]) else None
        a = snf.transpose([list(elems[j][0]) for j in lat])
        x = snf.solve(a, list(ue[0]))
        if x is None:
            return None
        for j, c in zip(lat, x):
            y[j] = c
        return y

    def is_whole_group(self, images):
        ms = [self.element(w)[1] for w in images]
        if not any(ms) or gcd(*ms) != 1:
            return False
        return None

    def has_infinite_order(self, w):
        return not self.is_identity(w)

    def spec(self):
        entries = ",".join(str(x) for row in self.matrix for x in row)
        return f"zsemiz({self.k};{entries})"


class PresentationOracle(GroupOracle):
    """Finitely presented group with a bounded rewriting search."""

    kind = "presentation"
    exact = False

    def __init__(self, gens, relators, depth: int = 10, frontier_cap: int = 4000):
        super().__init__(gens)
        self._relators = [reduce(r) for r in relators]
        self.depth = depth
        self.frontier_cap = frontier_cap

    def relators(self):
        return list(self._relators)

    def normalize(self, w):
        return reduce(w)

    @cached_property
    def _abelian_relations(self):
        idx = {g: i for i, g in enumerate(self.gens)}
        cols = []
        for r in self._relators:
            v = [0] * len(self.gens)
            for s, e in r:
                v[idx[s]] += e
            cols.append(v)
        return snf.transpose(cols, len(self.gens)) if cols else [[] for _ in self.gens]

    def _abelian_vector(self, w):
        idx = {g: i for i, g in enumerate(self.gens)}
        v = [0] * len(self.gens)
        for s, e in w:
            v[idx[s]] += e
        return v

    def abelian_trivial(self, w) -> bool:
        v = self._abelian_vector(w)
        if not self._relators:
            return not any(v)
        return snf.solve(self._abelian_relations, v) is not None

    @cached_property
    def _pieces(self):
        variants = []
        for r in self._relators:
            for rr in (r, inv(r)):
                letters = expand(rr)
                for i in range(len(letters)):
                    variants.append(letters[i:] + letters[:i])
        return variants

    def search_identity(self, w) -> bool:
        """Bounded breadth-first relator rewriting; True iff it reaches 1."""
        start = tuple(expand(reduce(w)))
        if not start:
            return True
        cap = len(start) + max((len(p) for p in self._pieces), default=0)
        seen = {start}
        frontier = [start]
        for _ in range(self.depth):
            nxt = []
            for word in frontier:
                n = len(word)
                for piece in self._pieces:
                    plen = len(piece)
                    for i in range(n + 1):
                        for k in range(0, min(plen, n - i) + 1):
                            if tuple(piece[:k]) != word[i:i + k]:
                                break
                            rest = expand(inv(reduce(piece[k:])))
                            cand = tuple(expand(reduce(list(word[:i]) + rest + list(word[i + k:]))))
                            if not cand:
                                return True
                            if len(cand) <= cap and cand not in seen:
                                seen.add(cand)
                                nxt.append(cand)
            nxt.sort(key=len)
            frontier = nxt[:self.frontier_cap]
            if not frontier:
                break
        return False

    def is_identity(self, w):
        w = reduce(w)
        if not w:
            return True
        if not self.abelian_trivial(w):
            return False
        if self.search_identity(w):
            return True
        raise Undecided(f"could not decide whether {format_word(w)} is trivial")

    def subgroup_coordinates(self, u, images, search: int = 6):
        images = list(images)
        if not images:
            return [] if self.is_identity(u) else None
        if len(images) > 1:
            raise Unsupported("membership for non-cyclic subgroups of presented groups")
        w = images[0]
        uv, wv = self._abelian_vector(u), self._abelian_vector(w)
        # abelianization: u in <w> forces uv = n*wv modulo relator columns
        cols = [wv] + snf.transpose(self._abelian_relations) if self._relators else [wv]
        if snf.solve(snf.transpose(cols), uv) is None:
            return None
        for n in sorted(range(-search, search + 1), key=abs):
            try:
                if self.is_identity(mul(u, power(w, -n))):
                    return [n]
            except Undecided:
                continue
        raise Undecided("cyclic membership not settled within the search window")

    def spec(self):
        rels = ",".join(format_word(r) for r in self._relators)
        return f"presentation({','.join(self.gens)};{rels})"
