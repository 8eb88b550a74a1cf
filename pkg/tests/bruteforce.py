"""Independent slow oracles used to cross-check the library.

Nothing here imports gogout: words are plain tuples of (symbol, +-1).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


# -- integer matrices -------------------------------------------------------

def _det(m):
    n = len(m)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in m]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return int(d)


def minor_gcds(a):
    """d_k = gcd of all k x k minors, for k = 1 .. min(rows, cols)."""
    rows, cols = len(a), len(a[0]) if a else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[a[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def invariant_factors_by_minors(a):
    ds = minor_gcds(a)
    out, prev = [], 1
    for d in ds:
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


# -- words ------------------------------------------------------------------

def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w):
    return tuple((s, -e) for s, e in reversed(w))


def reduced_words(symbols, max_length):
    letters = [(s, e) for s in symbols for e in (1, -1)]
    level = [()]
    out = [()]
    for _ in range(max_length):
        level = [w + (c,) for w in level for c in letters
                 if not (w and w[-1][0] == c[0] and w[-1][1] == -c[1])]
        out.extend(level)
    return out


def _pieces(relators):
    """All (p, s) with p s a cyclic conjugate of a relator or its inverse."""
    variants = set()
    for r in relators:
        for rr in (r, inverse(r)):
            for i in range(len(rr)):
                variants.add(rr[i:] + rr[:i])
    out = set()
    for v in variants:
        for k in range(1, len(v) + 1):
            out.add((v[:k], inverse(v[k:])))
    return sorted(out)


class RewritingClasses:
    """Union-find over words, joining w and w' whenever one piece of a
    relator in w is swapped for the complementary piece, as long as every
    intermediate word stays within max_length letters."""

    def __init__(self, relators, max_length):
        self.moves = _pieces(relators)
        self.max_length = max_length
        self.parent = {}

    def find(self, w):
        self.parent.setdefault(w, w)
        while self.parent[w] != w:
            self.parent[w] = self.parent[self.parent[w]]
            w = self.parent[w]
        return w

    def _union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            return True
        return False

    def neighbours(self, w):
        n = len(w)
        for p, s in self.moves:
            k = len(p)
            for i in range(n - k + 1):
                if w[i:i + k] == p:
                    nw = free_reduce(w[:i] + s + w[i + k:])
                    if len(nw) <= self.max_length:
                        yield nw

    def explore(self, starts):
        seen = set()
        stack = list(starts)
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            for nw in self.neighbours(w):
                self._union(w, nw)
                if nw not in seen:
                    stack.append(nw)

    def equal(self, a, b):
        return self.find(free_reduce(a)) == self.find(free_reduce(b))


# -- a cheap invariant for BS(m, n) -----------------------------------------

def affine_image(w, a="a", t="t", m=2, n=3):
    """Image in the affine group x -> q x + b, with a -> x + 1 and t -> (n/m) x.
    Equal words have equal images."""
    q, b = Fraction(1), Fraction(0)
    for s, e in w:
        if s == a:
            gq, gb = Fraction(1), Fraction(e)
        else:
            gq, gb = Fraction(n, m) ** e, Fraction(0)
        q, b = q * gq, q * gb + b
    return q, b
