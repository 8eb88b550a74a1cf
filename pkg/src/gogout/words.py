"""Words in named generators.

A word is a tuple of ``(symbol, exponent)`` pairs with nonzero exponents and
no two adjacent pairs sharing a symbol.  The empty tuple is the identity.
Everything here is plain free-group bookkeeping; group-specific reduction
lives in the oracles.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

Word = tuple  # tuple[tuple[str, int], ...]

IDENTITY: Word = ()

_TOKEN = re.compile(r"^([A-Za-z0-9_]+)(?:\^(-?\d+))?$")
_SYMBOL = re.compile(r"^[A-Za-z0-9_]+$")


def is_symbol(name: str) -> bool:
    return bool(_SYMBOL.match(name))


def reduce(letters: Iterable[tuple[str, int]]) -> Word:
    """Free reduction: merge equal neighbours, drop zero exponents."""
    out: list[list] = []
    for sym, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == sym:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([sym, exp])
    return tuple((s, e) for s, e in out)


def mul(*words: Sequence[tuple[str, int]]) -> Word:
    return reduce(pair for w in words for pair in w)


def inv(w: Sequence[tuple[str, int]]) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def power(w: Word, n: int) -> Word:
    if n < 0:
        return power(inv(w), -n)
    return reduce(list(w) * n)


def conj(m: Word, w: Word) -> Word:
    """m w m^-1."""
    return mul(m, w, inv(m))


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1."""
    return mul(a, b, inv(a), inv(b))


def gen(sym: str, exp: int = 1) -> Word:
    return ((sym, exp),) if exp else ()


def length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def symbols(w: Word) -> set[str]:
    return {s for s, _ in w}


def expand(w: Word) -> list[tuple[str, int]]:
    """Unit-exponent letter list, e.g. a^2 b^-1 -> [(a,1),(a,1),(b,-1)]."""
    out = []
    for s, e in w:
        step = 1 if e > 0 else -1
        out.extend([(s, step)] * abs(e))
    return out


def substitute(w: Word, images: dict) -> Word:
    """Replace each symbol by its image word; unmapped symbols are kept."""
    parts = []
    for s, e in w:
        img = images.get(s)
        if img is None:
            parts.append(((s, e),))
        else:
            parts.append(power(img, e))
    return mul(*parts)


def parse_word(text: str) -> Word:
    """Parse ``"a b^-1 c^3"``; ``"1"`` or blank is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp == 0:
            raise ValueError(f"zero exponent in token {tok!r}")
        letters.append((m.group(1), exp))
    return reduce(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(s if e == 1 else f"{s}^{e}" for s, e in w)


# -- free group utilities -------------------------------------------------

def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return (u, c) with w = u c u^-1 and c cyclically reduced."""
    letters = expand(reduce(w))
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return reduce(letters[:i]), reduce(letters[i:j + 1])


def root(w: Word) -> tuple[Word, Word, int]:
    """Primitive root decomposition in a free group.

    Returns ``(u, r, k)`` with ``w = u r^k u^-1``, ``r`` cyclically reduced and
    not a proper power, ``k >= 1``.  ``w`` must be nontrivial.
    """
    u, c = cyclic_reduce(w)
    letters = expand(c)
    n = len(letters)
    if n == 0:
        raise ValueError("trivial word has no root")
    for p in range(1, n + 1):
        if n % p == 0 and letters == letters[:p] * (n // p):
            return u, reduce(letters[:p]), n // p
    raise AssertionError("unreachable")


def free_cyclic_log(x: Word, w: Word) -> int | None:
    """n with x = w^n in a free group, or None."""
    x = reduce(x)
    if not w:
        return 0 if not x else None
    u, r, k = root(w)
    v = expand(mul(inv(u), x, u))
    if not v:
        return 0
    rl = expand(r)
    p = len(rl)
    if len(v) % p:
        return None
    m = len(v) // p
    if v == rl * m:
        pass
    elif v == expand(inv(r)) * m:
        m = -m
    else:
        return None
    if m % k:
        return None
    return m // k


def is_cyclic_permutation(a: Word, b: Word) -> bool:
    la, lb = expand(a), expand(b)
    if len(la) != len(lb):
        return False
    if not la:
        return True
    doubled = la + la
    return any(doubled[i:i + len(lb)] == lb for i in range(len(la)))


def free_conjugate(a: Word, b: Word) -> bool:
    """Conjugacy test in a free group via cyclic reduction."""
    return is_cyclic_permutation(cyclic_reduce(a)[1], cyclic_reduce(b)[1])
