"""Lex, colex and simplicial orders on subsets of [n].

Subsets are bitmasks (bit ``i - 1`` for element ``i``).  The minimum of a
symmetric difference is the lowest set bit of the XOR and the maximum is the
highest, so every comparison is a couple of integer operations.  Colex order
within a layer coincides with numeric order of the masks.

Ranks are exact Python integers at any size.
"""

from __future__ import annotations

import enum
from functools import cmp_to_key
from itertools import combinations, islice
from math import comb

from .cube import SetFamily, VertexSet, layer_masks, to_mask


class OrderKind(enum.Enum):
    LEX = "lex"
    COLEX = "colex"
    SIMPLICIAL = "simplicial"
    COLEX_REVERSED = "colex-reversed"


def _same_size(a: int, b: int) -> None:
    if a.bit_count() != b.bit_count():
        raise ValueError(f"sets of different sizes: {a.bit_count()} vs {b.bit_count()}")


def _sign(x: bool, y: bool) -> int:
    return -1 if x else (1 if y else 0)


def lex_compare(a: int, b: int) -> int:
    """-1 if A <_L B, i.e. min(A △ B) lies in A; 0 if equal; 1 otherwise."""
    _same_size(a, b)
    d = a ^ b
    if not d:
        return 0
    return -1 if a & (d & -d) else 1


def colex_compare(a: int, b: int) -> int:
    """-1 if A <_C B, i.e. max(A △ B) lies in B."""
    _same_size(a, b)
    d = a ^ b
    if not d:
        return 0
    return -1 if b >> (d.bit_length() - 1) & 1 else 1


def colex_reversed_compare(a: int, b: int) -> int:
    """Colex with the alphabet read as n < n-1 < ... < 1.

    The largest element under the reversed alphabet is the smallest integer,
    so A comes first when min(A △ B) lies in B.
    """
    _same_size(a, b)
    d = a ^ b
    if not d:
        return 0
    return -1 if b & (d & -d) else 1


def simplicial_compare(a: int, b: int) -> int:
    """Size first, ties broken by lex."""
    sa, sb = a.bit_count(), b.bit_count()
    if sa != sb:
        return _sign(sa < sb, sa > sb)
    return lex_compare(a, b)


_COMPARATORS = {
    OrderKind.LEX: lex_compare,
    OrderKind.COLEX: colex_compare,
    OrderKind.COLEX_REVERSED: colex_reversed_compare,
    OrderKind.SIMPLICIAL: simplicial_compare,
}


def compare(kind: OrderKind, a: int, b: int) -> int:
    return _COMPARATORS[kind](a, b)


def sort_key(kind: OrderKind):
    return cmp_to_key(_COMPARATORS[kind])


def reverse_alphabet(mask: int, n: int) -> int:
    """Relabel i -> n + 1 - i."""
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << (n - low.bit_length())
        mask ^= low
    return out


def _check_layer(n: int, r: int) -> None:
    if not 0 <= r <= n:
        raise ValueError(f"layer index r={r} outside [0, {n}]")


def _check_member(a: int, n: int) -> None:
    if a < 0 or a >> n:
        raise ValueError(f"set {a:#x} is not a subset of [{n}]")


def _check_rank(n: int, r: int, m: int) -> None:
    _check_layer(n, r)
    if not 0 <= m < comb(n, r):
        raise ValueError(f"rank {m} outside [0, C({n},{r}) = {comb(n, r)})")


def colex_rank(a: int) -> int:
    """Position of A in the colex enumeration of its layer: Σ_j C(a_j - 1, j)."""
    rank = 0
    j = 1
    while a:
        low = a & -a
        rank += comb(low.bit_length() - 1, j)
        a ^= low
        j += 1
    return rank


def colex_unrank(n: int, r: int, m: int) -> int:
    _check_rank(n, r, m)
    mask = 0
    top = n - 1
    for j in range(r, 0, -1):
        b = top
        while comb(b, j) > m:
            b -= 1
        mask |= 1 << b
        m -= comb(b, j)
        top = b - 1
    return mask


def lex_rank(a: int, n: int) -> int:
    """Number of r-subsets of [n] preceding A in lex order."""
    _check_member(a, n)
    r = a.bit_count()
    rank = 0
    prev = -1
    j = 1
    while a:
        low = a & -a
        e = low.bit_length() - 1
        for x in range(prev + 1, e):
            rank += comb(n - 1 - x, r - j)
        prev = e
        a ^= low
        j += 1
    return rank


def lex_unrank(n: int, r: int, m: int) -> int:
    _check_rank(n, r, m)
    mask = 0
    x = 0
    for j in range(1, r + 1):
        while True:
            block = comb(n - 1 - x, r - j)
            if m < block:
                break
            m -= block
            x += 1
        mask |= 1 << x
        x += 1
    return mask


def colex_reversed_rank(a: int, n: int) -> int:
    _check_member(a, n)
    return colex_rank(reverse_alphabet(a, n))


def colex_reversed_unrank(n: int, r: int, m: int) -> int:
    return reverse_alphabet(colex_unrank(n, r, m), n)


def rank(kind: OrderKind, a: int, n: int) -> int:
    """Rank within the layer of A (or within all of 2^[n] for simplicial)."""
    if kind is OrderKind.COLEX:
        _check_member(a, n)
        return colex_rank(a)
    if kind is OrderKind.LEX:
        return lex_rank(a, n)
    if kind is OrderKind.COLEX_REVERSED:
        return colex_reversed_rank(a, n)
    _check_member(a, n)
    r = a.bit_count()
    return sum(comb(n, i) for i in range(r)) + lex_rank(a, n)


def unrank(kind: OrderKind, n: int, m: int, r: int | None = None) -> int:
    if kind is OrderKind.SIMPLICIAL:
        if not 0 <= m < 1 << n:
            raise ValueError(f"rank {m} outside [0, 2^{n})")
        r = 0
        while m >= comb(n, r):
            m -= comb(n, r)
            r += 1
        return lex_unrank(n, r, m)
    if r is None:
        raise ValueError(f"{kind.value} unrank needs a layer index r")
    if kind is OrderKind.COLEX:
        return colex_unrank(n, r, m)
    if kind is OrderKind.LEX:
        return lex_unrank(n, r, m)
    return colex_reversed_unrank(n, r, m)


def _check_segment(n: int, r: int, m: int) -> None:
    _check_layer(n, r)
    if not 0 <= m <= comb(n, r):
        raise ValueError(f"segment length {m} outside [0, C({n},{r}) = {comb(n, r)}]")


def lex_segment_masks(n: int, r: int, m: int) -> list[int]:
    """The first m sets of [n]^(r) under <_L, in order."""
    _check_segment(n, r, m)
    # combinations() emits sorted tuples lexicographically, which is <_L
    return [to_mask(c) for c in islice(combinations(range(1, n + 1), r), m)]


def colex_segment_masks(n: int, r: int, m: int) -> list[int]:
    _check_segment(n, r, m)
    return list(islice(layer_masks(n, r), m))


def lex_initial_segment(n: int, r: int, m: int) -> SetFamily:
    return SetFamily._trusted(n, r, frozenset(lex_segment_masks(n, r, m)))


def colex_initial_segment(n: int, r: int, m: int) -> SetFamily:
    return SetFamily._trusted(n, r, frozenset(colex_segment_masks(n, r, m)))


def colex_reversed_initial_segment(n: int, r: int, m: int) -> SetFamily:
    return SetFamily._trusted(
        n, r, frozenset(reverse_alphabet(x, n) for x in colex_segment_masks(n, r, m)))


def initial_segment(kind: OrderKind, n: int, r: int, m: int) -> SetFamily:
    if kind is OrderKind.LEX:
        return lex_initial_segment(n, r, m)
    if kind is OrderKind.COLEX:
        return colex_initial_segment(n, r, m)
    if kind is OrderKind.COLEX_REVERSED:
        return colex_reversed_initial_segment(n, r, m)
    raise ValueError("simplicial segments span layers; use simplicial_initial_segment")


def simplicial_segment_masks(n: int, length: int) -> list[int]:
    """The first ``length`` vertices of Q_n under <_S, in order."""
    if not 0 <= length <= 1 << n:
        raise ValueError(f"segment length {length} outside [0, 2^{n}]")
    out: list[int] = []
    r = 0
    while length:
        take = min(length, comb(n, r))
        out.extend(lex_segment_masks(n, r, take))
        length -= take
        r += 1
    return out


def simplicial_initial_segment(n: int, length: int) -> VertexSet:
    """S_ℓ: complete layers bottom-up, then a lex prefix of the next layer."""
    return VertexSet._trusted(n, frozenset(simplicial_segment_masks(n, length)))


def complement_family(F: SetFamily) -> SetFamily:
    full = (1 << F.n) - 1
    return SetFamily._trusted(F.n, F.n - F.r, frozenset(full ^ m for m in F.members))
