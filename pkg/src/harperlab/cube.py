"""Vertices, vertex sets and neighbourhood operators of the hypercube Q_n.

A vertex of Q_n is stored as an ``n``-bit mask: bit ``i - 1`` is set exactly
when coordinate ``i`` equals 1, so the mask doubles as the subset
``Z_v = {i : v_i = 1}`` of ``[n]``.  Bit strings such as ``"100"`` are read
left to right as coordinates ``1..n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

MAX_DIM = 256


def _check_dim(n: int) -> None:
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension must lie in [0, {MAX_DIM}], got {n}")


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the single-bit masks of ``x``, lowest first."""
    while x:
        low = x & -x
        yield low
        x ^= low


def to_mask(elements: Iterable[int]) -> int:
    """Encode a subset of ``[n]`` (1-based) as a bitmask."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def to_set(mask: int) -> frozenset[int]:
    """Decode a bitmask into the 1-based subset it represents."""
    return frozenset(low.bit_length() for low in iter_bits(mask))


def format_set(mask: int) -> str:
    """``{1,3}`` style rendering of a mask."""
    return "{" + ",".join(str(e) for e in sorted(to_set(mask))) + "}"


def parse_bits(s: str) -> int:
    """Parse a coordinate string (left character is coordinate 1)."""
    if not s or set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def format_bits(mask: int, n: int) -> str:
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


@dataclass(frozen=True, order=True)
class Vertex:
    n: int
    bits: int

    def __post_init__(self):
        _check_dim(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"mask {self.bits:#x} has bits above position {self.n - 1}")

    @classmethod
    def from_bits(cls, s: str) -> Vertex:
        return cls(len(s), parse_bits(s))

    @classmethod
    def from_set(cls, n: int, elements: Iterable[int]) -> Vertex:
        return cls(n, to_mask(elements))

    @property
    def support(self) -> frozenset[int]:
        """The set Z_v of coordinates equal to 1."""
        return to_set(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> Vertex:
        return Vertex(self.n, self.bits ^ ((1 << self.n) - 1))

    def __str__(self):
        return format_bits(self.bits, self.n)


@dataclass(frozen=True)
class VertexSet:
    """An immutable set of vertices of one Q_n.

    Members are kept as masks; iteration is in increasing mask order so that
    anything derived from a ``VertexSet`` is reproducible.
    """

    n: int
    members: frozenset[int]

    def __post_init__(self):
        _check_dim(self.n)
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        limit = 1 << self.n
        for m in self.members:
            if not 0 <= m < limit:
                raise ValueError(f"vertex {m:#x} does not belong to Q_{self.n}")

    @classmethod
    def of(cls, n: int, items: Iterable[int | Vertex | str]) -> VertexSet:
        masks = set()
        for item in items:
            if isinstance(item, Vertex):
                if item.n != n:
                    raise ValueError(f"vertex of Q_{item.n} in a set of Q_{n}")
                masks.add(item.bits)
            elif isinstance(item, str):
                if len(item) != n:
                    raise ValueError(f"bit string {item!r} has length != {n}")
                masks.add(parse_bits(item))
            else:
                masks.add(int(item))
        return cls(n, frozenset(masks))

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, frozenset(range(1 << n)))

    @classmethod
    def _trusted(cls, n: int, members: frozenset[int]) -> VertexSet:
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "members", members)
        return obj

    @cached_property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted)

    def __contains__(self, item):
        if isinstance(item, Vertex):
            return item.n == self.n and item.bits in self.members
        return item in self.members

    def vertices(self) -> list[Vertex]:
        return [Vertex(self.n, m) for m in self.sorted]

    def _same_cube(self, other: VertexSet) -> None:
        if other.n != self.n:
            raise ValueError(f"cannot combine subsets of Q_{self.n} and Q_{other.n}")

    def __or__(self, other: VertexSet) -> VertexSet:
        self._same_cube(other)
        return VertexSet._trusted(self.n, self.members | other.members)

    def __and__(self, other: VertexSet) -> VertexSet:
        self._same_cube(other)
        return VertexSet._trusted(self.n, self.members & other.members)

    def __sub__(self, other: VertexSet) -> VertexSet:
        self._same_cube(other)
        return VertexSet._trusted(self.n, self.members - other.members)

    def __le__(self, other: VertexSet) -> bool:
        self._same_cube(other)
        return self.members <= other.members

    def translate(self, v: int) -> VertexSet:
        """Image under the cube automorphism ``x -> x XOR v``."""
        return VertexSet._trusted(self.n, frozenset(m ^ v for m in self.members))

    def __repr__(self):
        shown = ", ".join(format_bits(m, self.n) for m in self.sorted[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"VertexSet(n={self.n}, |U|={len(self)}: {shown}{more})"


@dataclass(frozen=True)
class SetFamily:
    """A family of ``r``-subsets of ``[n]``, each stored as a bitmask.

    Sorting masks numerically is exactly the colex order on a layer, so
    ``sorted`` doubles as the colex enumeration of the family.
    """

    n: int
    r: int
    members: frozenset[int]

    def __post_init__(self):
        _check_dim(self.n)
        if not 0 <= self.r <= self.n:
            raise ValueError(f"layer index r={self.r} outside [0, {self.n}]")
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        limit = 1 << self.n
        for m in self.members:
            if not 0 <= m < limit or m.bit_count() != self.r:
                raise ValueError(f"{format_set(m)} is not an {self.r}-subset of [{self.n}]")

    @classmethod
    def of(cls, n: int, r: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        return cls(n, r, frozenset(to_mask(s) for s in sets))

    @classmethod
    def _trusted(cls, n: int, r: int, members: frozenset[int]) -> SetFamily:
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "r", r)
        object.__setattr__(obj, "members", members)
        return obj

    @cached_property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted)

    def __contains__(self, mask):
        return mask in self.members

    def sets(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.sorted]

    def __repr__(self):
        shown = ", ".join(format_set(m) for m in self.sorted[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"SetFamily(n={self.n}, r={self.r}, |F|={len(self)}: {shown}{more})"


def neighbours(v: Vertex) -> VertexSet:
    """Γ(v): the n vertices differing from ``v`` in exactly one coordinate."""
    return VertexSet._trusted(v.n, frozenset(v.bits ^ (1 << i) for i in range(v.n)))


def gamma_masks(n: int, masks: Iterable[int]) -> set[int]:
    flips = [1 << i for i in range(n)]
    out: set[int] = set()
    for m in masks:
        out.update(m ^ f for f in flips)
    return out


def gamma(U: VertexSet) -> VertexSet:
    """Γ(U), the union of the neighbourhoods of members of U.

    Γ(U) may meet U: any member with a neighbour in U belongs to it.
    """
    return VertexSet._trusted(U.n, frozenset(gamma_masks(U.n, U.members)))


def closed_neighbourhood(U: VertexSet) -> VertexSet:
    return VertexSet._trusted(U.n, U.members | gamma(U).members)


def hamming_distance(u: Vertex, v: Vertex) -> int:
    if u.n != v.n:
        raise ValueError(f"dimension mismatch: {u.n} vs {v.n}")
    return (u.bits ^ v.bits).bit_count()


def layer_masks(n: int, r: int) -> Iterator[int]:
    """All r-subsets of [n] as masks, in colex (= increasing numeric) order."""
    if not 0 <= r <= n:
        raise ValueError(f"layer index r={r} outside [0, {n}]")
    if r == 0:
        yield 0
        return
    x = (1 << r) - 1
    limit = 1 << n
    while x < limit:
        yield x
        # Gosper's hack: next integer with the same popcount
        c = x & -x
        y = x + c
        x = (((y ^ x) >> 2) // c) | y


def layer(n: int, r: int) -> SetFamily:
    """The layer [n]^(r); its ``sorted`` view is the colex enumeration."""
    return SetFamily._trusted(n, r, frozenset(layer_masks(n, r)))


def kth_neighbourhood(v: Vertex, k: int) -> VertexSet:
    """Γ^k(v), the vertices at Hamming distance exactly k from v."""
    if not 0 <= k <= v.n:
        raise ValueError(f"k={k} outside [0, {v.n}]")
    return VertexSet._trusted(v.n, frozenset(v.bits ^ s for s in layer_masks(v.n, k)))


def neighbourhood_layers(v: Vertex) -> Iterator[VertexSet]:
    """Γ^0(v), Γ^1(v), ..., Γ^n(v) via Γ^k = Γ(Γ^{k-1}) minus Γ^{k-2}."""
    prev: frozenset[int] = frozenset()
    cur = frozenset([v.bits])
    for _ in range(v.n + 1):
        yield VertexSet._trusted(v.n, cur)
        prev, cur = cur, frozenset(gamma_masks(v.n, cur) - prev)


def kth_neighbourhood_recursive(v: Vertex, k: int) -> VertexSet:
    """Γ^k(v) through the recursive definition rather than distances."""
    if not 0 <= k <= v.n:
        raise ValueError(f"k={k} outside [0, {v.n}]")
    for j, shell in enumerate(neighbourhood_layers(v)):
        if j == k:
            return shell
    raise AssertionError("unreachable")


def sphere_overlap(A: VertexSet, w: int, k: int) -> int:
    """|Γ^k(w) ∩ A| by direct distance counting."""
    return sum(1 for a in A.members if (a ^ w).bit_count() == k)


def unique_counts_all_subsets(n: int, members: list[int]) -> np.ndarray:
    """|Γ(S) \\ Γ(B \\ S)| for every S ⊆ B, indexed by subset mask over ``members``.

    A neighbour x of B is unique to S exactly when every member of B adjacent
    to x lies in S, so the table is the subset-sum (zeta) transform of the
    histogram of adjacency patterns.
    """
    t = len(members)
    if len(set(members)) != t:
        raise ValueError("members must be distinct")
    pattern: dict[int, int] = {}
    for j, m in enumerate(members):
        for i in range(n):
            x = m ^ (1 << i)
            pattern[x] = pattern.get(x, 0) | (1 << j)
    f = np.bincount(np.fromiter(pattern.values(), dtype=np.int64, count=len(pattern)),
                    minlength=1 << t).astype(np.int64)
    h = 1
    while h < f.size:
        view = f.reshape(-1, 2, h)
        view[:, 1, :] += view[:, 0, :]
        h *= 2
    return f


def enumerate_subsets(n: int, max_members: int = 20) -> Iterator[VertexSet]:
    """Every subset of V(Q_n); only sensible for tiny cubes."""
    verts = list(range(1 << n))
    if len(verts) > max_members:
        raise ValueError(f"2^{n} vertices exceed the enumeration limit {max_members}")
    for size in range(len(verts) + 1):
        for combo in combinations(verts, size):
            yield VertexSet._trusted(n, frozenset(combo))
