"""Shadows and the quantitative lower bounds built on them.

Every bound is returned as an exact :class:`fractions.Fraction`; nothing in
this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .cube import (
    SetFamily, Vertex, VertexSet, closed_neighbourhood, iter_bits,
    unique_counts_all_subsets,
)
from .orderings import simplicial_initial_segment


def binom(a: int, b: int) -> int:
    """C(a, b), zero whenever a < 0, b < 0 or b > a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return comb(a, b)


def shadow(F: SetFamily) -> SetFamily:
    """∂F: all (r-1)-sets contained in some member of F."""
    if F.r == 0:
        raise ValueError("the shadow of layer 0 is undefined")
    out = set()
    for m in F.members:
        out.update(m ^ low for low in iter_bits(m))
    return SetFamily._trusted(F.n, F.r - 1, frozenset(out))


def upper_shadow(F: SetFamily) -> SetFamily:
    """∂⁺F: all (r+1)-sets containing some member of F."""
    if F.r >= F.n:
        raise ValueError(f"no layer above r={F.r} in [{F.n}]")
    full = (1 << F.n) - 1
    out = set()
    for m in F.members:
        out.update(m | low for low in iter_bits(full ^ m))
    return SetFamily._trusted(F.n, F.r + 1, frozenset(out))


def harper_min_closed(n: int, length: int) -> int:
    """|S_ℓ ∪ Γ(S_ℓ)|, the least closed neighbourhood of an ℓ-subset of Q_n."""
    return len(closed_neighbourhood(simplicial_initial_segment(n, length)))


def _check_size(n: int, r: int, m: int) -> None:
    if not 0 <= r <= n:
        raise ValueError(f"layer index r={r} outside [0, {n}]")
    if not 0 <= m <= comb(n, r):
        raise ValueError(f"family size {m} outside [0, C({n},{r})]")


def lym_shadow_bound(n: int, r: int, m: int) -> Fraction:
    """Local LYM lower bound m·C(n,r-1)/C(n,r) on |∂A|."""
    if r < 1:
        raise ValueError("lower LYM bound needs r >= 1")
    _check_size(n, r, m)
    return Fraction(m * comb(n, r - 1), comb(n, r))


def lym_upper_bound(n: int, r: int, m: int) -> Fraction:
    """Local LYM lower bound m·C(n,r+1)/C(n,r) on |∂⁺A|."""
    if r >= n:
        raise ValueError("upper LYM bound needs r < n")
    _check_size(n, r, m)
    return Fraction(m * comb(n, r + 1), comb(n, r))


def harper_gamma_lower(n: int, k: int, m: int) -> Fraction:
    """|Γ(B)| >= m·n/(k+1) - 2·C(n,k) for |B| = m <= C(n,k); may be negative."""
    if k < 0 or not 0 <= m <= binom(n, k):
        raise ValueError(f"need 0 <= m <= C({n},{k}), got m={m}")
    return Fraction(m * n, k + 1) - 2 * comb(n, k)


@dataclass(frozen=True)
class BandIndex:
    """The band ``i`` with lo <= |F| <= hi, lo = C(n,r)-C(n-i+1,r)+1, hi = C(n,r)-C(n-i,r)."""

    i: int
    lo: int
    hi: int


def band_interval(n: int, r: int, i: int) -> tuple[int, int]:
    top = comb(n, r)
    return top - binom(n - i + 1, r) + 1, top - binom(n - i, r)


def find_band_index(n: int, r: int, m: int) -> BandIndex:
    if not 0 <= r <= n:
        raise ValueError(f"layer index r={r} outside [0, {n}]")
    if not 1 <= m <= comb(n, r):
        raise ValueError(f"family size {m} outside [1, C({n},{r})]")
    # hi(i) is non-decreasing in i and reaches C(n,r) at i = n - r + 1
    lo_i, hi_i = 1, n - r + 1
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if band_interval(n, r, mid)[1] >= m:
            hi_i = mid
        else:
            lo_i = mid + 1
    lo, hi = band_interval(n, r, lo_i)
    return BandIndex(lo_i, lo, hi)


def kk_factor(n: int, r: int, i: int) -> Fraction:
    """(C(n,r+1) - C(n-i,r+1)) / (C(n,r) - C(n-i,r))."""
    den = comb(n, r) - binom(n - i, r)
    if i < 1 or den <= 0:
        raise ValueError(f"factor undefined for n={n}, r={r}, i={i}")
    return Fraction(comb(n, r + 1) - binom(n - i, r + 1), den)


def kk_refined_bound(n: int, r: int, i: int, m: int) -> Fraction:
    """Lower bound on |∂⁺F| for |F| = m lying in band i."""
    band = find_band_index(n, r, m)
    if band.i != i:
        raise ValueError(f"m={m} lies in band {band.i} = [{band.lo}, {band.hi}], not band {i}")
    return m * kk_factor(n, r, i)


def kk_factor_monotone_check(n: int, r: int, i_max: int) -> bool:
    """Is the band factor non-increasing for i = 1..i_max and constant past n - r?"""
    if r < 1 or r > n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    factors = [kk_factor(n, r, i) for i in range(1, i_max + 1)]
    if any(b > a for a, b in zip(factors, factors[1:])):
        return False
    plateau = Fraction(comb(n, r + 1), comb(n, r))
    return all(f == plateau for f in factors[n - r:])


def weighted_sum_identity(n: int, r: int, i: int) -> bool:
    """Σ_{j<i} C(n-j-1, r) = C(n,r+1) - C(n-i,r+1), as exact integers."""
    lhs = sum(binom(n - j - 1, r) for j in range(i))
    return lhs == comb(n, r + 1) - binom(n - i, r + 1)


def kruskbound_factor(n: int, r: int, c: Fraction) -> Fraction:
    """The cleaned factor (n-r)/(r+1)·(1 + (1-c)/r), for c in (0, 1)."""
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError(f"c must lie in (0, 1), got {c}")
    if r < 1:
        raise ValueError("need r >= 1")
    return Fraction(n - r, r + 1) * (1 + (1 - c) / r)


def kruskbound_lhs(n: int, r: int, a: int) -> tuple[Fraction, Fraction]:
    """Exact ratio (C(n,r+1)-C(a,r+1))/(C(n,r)-C(a,r)) and its c = 1 - C(a,r)/C(n,r)."""
    top = comb(n, r)
    c = Fraction(top - binom(a, r), top)
    if not 0 < c < 1:
        raise ValueError(f"a={a} gives c={c}, outside (0, 1)")
    return Fraction(comb(n, r + 1) - binom(a, r + 1), top - binom(a, r)), c


@dataclass
class BoundReport:
    """Both sides of an inequality ``lhs >= rhs``; lhs is the exact quantity."""

    lhs: int | Fraction
    rhs: Fraction
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def slack(self) -> Fraction:
        return Fraction(self.lhs) - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack >= 0

    def to_dict(self) -> dict[str, Any]:
        from .formats import jsonable
        return jsonable({"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                         "params": self.params})


def few_uniques_status(J: VertexSet, k: int, exhaustive_limit: int = 20) -> str:
    """How far the unique-neighbour hypothesis on J could be checked.

    Returns ``"verified-all-subsets"``, ``"verified-singletons"`` or
    ``"violated"``.  The threshold is |S|·n/(k+1)·(1 + 1/(8k)).
    """
    n = J.n
    members = list(J)
    # violation: u·8k(k+1) > |S|·n·(8k+1)
    if len(members) <= exhaustive_limit:
        counts = unique_counts_all_subsets(n, members)
        for s, u in enumerate(counts.tolist()):
            if u * 8 * k * (k + 1) > s.bit_count() * n * (8 * k + 1):
                return "violated"
        return "verified-all-subsets"
    nbr_count: dict[int, int] = {}
    for b in members:
        for i in range(n):
            x = b ^ (1 << i)
            nbr_count[x] = nbr_count.get(x, 0) + 1
    for b in members:
        u = sum(1 for i in range(n) if nbr_count[b ^ (1 << i)] == 1)
        if u * 8 * k * (k + 1) > n * (8 * k + 1):
            return "violated"
    return "verified-singletons"


def expansion_check(J: VertexSet, v: Vertex, j: int, k: int,
                    assume_hypothesis: bool = False,
                    exhaustive_limit: int = 20) -> BoundReport:
    """Measure |J ∩ Γ^{j+2}(v)| against (n/64k³)·|J ∩ Γ^j(v)|.

    The report's params carry the tighter constant 16k(k+1)², the
    intermediate upper-shadow estimate, whether |J ∩ Γ^j(v)| falls in
    [1, C(n,k)/2], and the status of the unique-neighbour hypothesis (only
    singletons are checked when |J| exceeds ``exhaustive_limit``).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if j > 2 * k or j < 0:
        raise ValueError(f"need 0 <= j <= 2k, got j={j}, k={k}")
    n = J.n
    if v.n != n:
        raise ValueError("vertex and set live in different cubes")
    dist = {}
    for x in J.members:
        d = (x ^ v.bits).bit_count()
        dist[d] = dist.get(d, 0) + 1
    here, above = dist.get(j, 0), dist.get(j + 2, 0)
    rhs = Fraction(n, 64 * k ** 3) * here
    rhs_tight = Fraction(n, 16 * k * (k + 1) ** 2) * here

    params: dict[str, Any] = {"n": n, "j": j, "k": k, "v": str(v),
                              "layer_j": here, "layer_j_plus_2": above,
                              "rhs_tight": rhs_tight}
    params["in_range"] = 1 <= here and 2 * here <= comb(n, k)
    if j < n:
        fam = SetFamily._trusted(n, j, frozenset(x ^ v.bits for x in J.members
                                                 if (x ^ v.bits).bit_count() == j))
        params["upper_shadow"] = len(upper_shadow(fam))
        params["upper_shadow_rhs"] = here * Fraction(n, k + 1) * (1 + Fraction(1, 4 * k))
    params["hypothesis"] = "assumed" if assume_hypothesis else few_uniques_status(
        J, k, exhaustive_limit)
    return BoundReport(above, rhs, params)
