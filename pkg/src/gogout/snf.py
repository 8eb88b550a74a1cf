"""Smith normal form over the integers, with transforms.

Matrices are lists of rows of Python ints, so arithmetic never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, src, dst, k):
    """row[dst] += k * row[src]"""
    if k:
        rs, rd = m[src], m[dst]
        for c in range(len(rd)):
            rd[c] += k * rs[c]


def _add_col(m, src, dst, k):
    if k:
        for row in m:
            row[dst] += k * row[src]


def smith_normal_form(matrix):
    """Return ``(U, S, V)`` with ``U @ M @ V == S``.

    ``S`` is diagonal (rectangular, same shape as ``M``) with nonnegative
    entries ``d1 | d2 | ...``; ``U`` and ``V`` are unimodular.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    s = [list(map(int, r)) for r in matrix]
    u = identity(rows)
    v = identity(cols)

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        _swap_rows(s, t, i)
        _swap_rows(u, t, i)
        _swap_cols(s, t, j)
        _swap_cols(v, t, j)

        while True:
            p = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = s[i][t] // p
                _add_row(s, t, i, -q)
                _add_row(u, t, i, -q)
                if s[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = s[t][j] // p
                _add_col(s, t, j, -q)
                _add_col(v, t, j, -q)
                if s[t][j]:
                    dirty = True
            if dirty:
                # a remainder is smaller than the pivot; move it up and repeat
                best = None
                for i in range(t + 1, rows):
                    if s[i][t] and (best is None or abs(s[i][t]) < abs(s[best][t])):
                        best = i
                if best is not None:
                    _swap_rows(s, t, best)
                    _swap_rows(u, t, best)
                    continue
                best = None
                for j in range(t + 1, cols):
                    if s[t][j] and (best is None or abs(s[t][j]) < abs(s[t][best])):
                        best = j
                _swap_cols(s, t, best)
                _swap_cols(v, t, best)
                continue
            # divisibility: pivot must divide the whole trailing block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _add_row(s, bad, t, 1)
            _add_row(u, bad, t, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, s, v


def invariant_factors(matrix) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    _, s, _ = smith_normal_form(matrix)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


def rank(matrix) -> int:
    return len(invariant_factors(matrix)) if matrix and matrix[0] else 0


@dataclass(frozen=True)
class Cokernel:
    """Isomorphism type of Z^rows / (column span)."""

    free_rank: int
    torsion: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "trivial"


def cokernel(matrix, nrows: int | None = None) -> Cokernel:
    """Cokernel of an integer matrix acting on columns."""
    if nrows is None:
        nrows = len(matrix)
    if nrows == 0:
        return Cokernel(0, ())
    if not matrix or not matrix[0]:
        return Cokernel(nrows, ())
    factors = invariant_factors(matrix)
    return Cokernel(nrows - len(factors), tuple(d for d in factors if d > 1))


def solve(a, b):
    """Integer solution x of ``a @ x == b``, or None.  ``a`` is m x n."""
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [0] * n
    u, s, v = smith_normal_form(a)
    ub = [sum(u[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = s[i][i] if i < n else 0
        if d == 0:
            if ub[i]:
                return None
        else:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
    return [sum(v[i][k] * y[k] for k in range(n)) for i in range(n)]


def nullspace(a, ncols: int | None = None) -> list[list[int]]:
    """Basis of the integer kernel {x : a x = 0} as a list of vectors."""
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    if m == 0:
        return identity(n)
    _, s, v = smith_normal_form(a)
    r = sum(1 for i in range(min(m, n)) if s[i][i])
    return [[v[i][k] for i in range(n)] for k in range(r, n)]


def det(a) -> int:
    """Exact determinant (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
