"""Constructive side of the stability theorem for vertex sets of size C(n,k).

Pipeline: check the neighbourhood hypothesis, greedily discard sets with too
many unique neighbours, locate the best sphere centre, and compare the
overlap with the guaranteed error bound.  The theorem itself is asymptotic,
so at desk scale every report is evidence, never proof.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, NamedTuple

import numpy as np

from .cube import (
    Vertex, VertexSet, gamma, gamma_masks, kth_neighbourhood, sphere_overlap,
    unique_counts_all_subsets,
)
from .formats import fraction_str, jsonable, parse_fraction
from .orderings import colex_segment_masks
from .shadows import BoundReport

EXACT_CENTER_MAX_N = 24
EXHAUSTIVE_SEARCH_MAX = 20


class SearchClass(enum.Enum):
    SINGLETONS = "singletons"
    PAIRS = "singletons+pairs"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class StabilityParams:
    """(n, k, p, ρ, κ, δ) with the derived constants C and D.

    ``rho`` defaults to ``p``, ``kappa`` to ``k/p`` and ``delta`` to
    ``p·k³/n``, the tightest values the constraints allow.
    """

    n: int
    k: int
    p: Fraction
    rho: Fraction | None = None
    kappa: Fraction | None = None
    delta: Fraction | None = None

    def __post_init__(self):
        p = Fraction(self.p)
        object.__setattr__(self, "p", p)
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if p <= 0:
            raise ValueError("p must be positive")
        for name, default in (("rho", p), ("kappa", Fraction(self.k) / p),
                              ("delta", p * self.k ** 3 / self.n)):
            value = getattr(self, name)
            object.__setattr__(self, name, default if value is None else Fraction(value))
        if self.rho <= 0 or self.kappa <= 0:
            raise ValueError("rho and kappa must be positive")
        if p < self.rho:
            raise ValueError(f"p={p} is below rho={self.rho}")
        if self.k > self.kappa * p:
            raise ValueError(f"k={self.k} exceeds kappa*p={self.kappa * p}")
        if p * self.k ** 3 > self.delta * self.n:
            raise ValueError(f"p k^3 / n = {p * self.k ** 3 / self.n} exceeds delta={self.delta}")

    @property
    def C(self) -> Fraction:
        return 24 + 33 / self.rho + 32 * self.kappa

    @property
    def D(self) -> Fraction:
        return 16 + 32 / self.rho

    @property
    def error_allowance(self) -> Fraction:
        """C·C(n,k-1)·p·k, the permitted number of vertices off the sphere."""
        return self.C * comb(self.n, self.k - 1) * self.p * self.k

    @property
    def discard_allowance(self) -> Fraction:
        """D·C(n,k-1)·p·k, the most the discard step may remove."""
        return self.D * comb(self.n, self.k - 1) * self.p * self.k

    @property
    def gamma_budget(self) -> Fraction:
        return comb(self.n, self.k + 1) + comb(self.n, self.k) * self.p

    def unique_threshold(self, size: int) -> Fraction:
        """|S|·n/(k+1)·(1 + 1/(8k))."""
        k = self.k
        return Fraction(size * self.n * (8 * k + 1), 8 * k * (k + 1))

    def warnings(self) -> list[str]:
        out = []
        n, k = self.n, self.k
        # diagnostic only, so floating point is acceptable here
        loglog = math.log(math.log(n)) if n > math.e else 0.0
        if loglog <= 0 or k > math.log(n) / (3 * loglog):
            out.append("k-exceeds-log-bound")
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "k": self.k, "p": fraction_str(self.p),
                "rho": fraction_str(self.rho), "kappa": fraction_str(self.kappa),
                "delta": fraction_str(self.delta), "C": fraction_str(self.C),
                "D": fraction_str(self.D)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StabilityParams:
        try:
            n, k, p = int(data["n"]), int(data["k"]), parse_fraction(data["p"])
        except KeyError as exc:
            raise ValueError(f"params block lacks {exc}") from None
        opt = {name: parse_fraction(data[name]) for name in ("rho", "kappa", "delta")
               if data.get(name) is not None}
        return cls(n, k, p, **opt)


def hypothesis_check(A: VertexSet, params: StabilityParams) -> bool:
    """|A| = C(n,k) and |Γ(A)| <= C(n,k+1) + C(n,k)·p."""
    if A.n != params.n or len(A) != comb(params.n, params.k):
        return False
    return len(gamma(A)) <= params.gamma_budget


def uniqueness_count(S: VertexSet, B: VertexSet) -> int:
    """|Γ(S) \\ Γ(B \\ S)|: neighbours of B seen only through S."""
    if not S <= B:
        raise ValueError("S must be a subset of B")
    return len(gamma(S) - gamma(B - S))


@dataclass(frozen=True)
class DiscardStep:
    removed: tuple[int, ...]
    unique: int
    threshold: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"removed": [hex(m) for m in self.removed], "unique": self.unique,
                "threshold": self.threshold}


class _Neighbourhood:
    """Multiplicity of each vertex in Γ(B), maintained under deletions."""

    def __init__(self, n: int, members):
        self.n = n
        self.B = set(members)
        self.cnt: dict[int, int] = {}
        for b in self.B:
            self._bump(b, 1)

    def _bump(self, b: int, delta: int) -> None:
        cnt = self.cnt
        for i in range(self.n):
            x = b ^ (1 << i)
            c = cnt.get(x, 0) + delta
            if c:
                cnt[x] = c
            else:
                del cnt[x]

    def remove(self, S) -> None:
        for b in S:
            self.B.remove(b)
            self._bump(b, -1)

    def unique(self, b: int) -> int:
        cnt = self.cnt
        return sum(1 for i in range(self.n) if cnt[b ^ (1 << i)] == 1)

    def pair_shared(self) -> dict[tuple[int, int], int]:
        """Neighbours adjacent to exactly two members, keyed by that pair."""
        shared: dict[tuple[int, int], int] = {}
        B = self.B
        for x, c in self.cnt.items():
            if c != 2:
                continue
            a, b = sorted(x ^ (1 << i) for i in range(self.n) if x ^ (1 << i) in B)
            shared[(a, b)] = shared.get((a, b), 0) + 1
        return shared


def _find_violator(nb: _Neighbourhood, params: StabilityParams, search: SearchClass):
    if search is SearchClass.EXHAUSTIVE:
        members = sorted(nb.B)
        if len(members) > EXHAUSTIVE_SEARCH_MAX:
            raise ValueError(f"exhaustive search needs |B| <= {EXHAUSTIVE_SEARCH_MAX}")
        if not members:
            return None
        counts = unique_counts_all_subsets(params.n, members)
        sizes = np.bitwise_count(np.arange(counts.size, dtype=np.uint32)).astype(np.int64)
        k = params.k
        bad = counts * (8 * k * (k + 1)) > sizes * (params.n * (8 * k + 1))
        idx = np.flatnonzero(bad)
        if idx.size == 0:
            return None
        s = int(idx[np.lexsort((idx, sizes[idx]))[0]])
        return tuple(m for j, m in enumerate(members) if s >> j & 1), int(counts[s])

    t1 = params.unique_threshold(1)
    singles = {}
    for b in sorted(nb.B):
        u = nb.unique(b)
        if u > t1:
            return (b,), u
        singles[b] = u
    if search is SearchClass.PAIRS:
        t2 = params.unique_threshold(2)
        for (a, b), extra in sorted(nb.pair_shared().items()):
            u = singles[a] + singles[b] + extra
            if u > t2:
                return (a, b), u
    return None


def discard_algorithm(A: VertexSet, params: StabilityParams,
                      search_class: SearchClass | str = SearchClass.SINGLETONS
                      ) -> tuple[VertexSet, list[DiscardStep]]:
    """Remove sets S with too many unique neighbours until none is left.

    S ranges over ``search_class``: singletons, singletons plus pairs, or
    every subset (only while |B| <= 20).  Among violators the first in
    (size, mask) order is removed, so the trace is deterministic.
    """
    search = SearchClass(search_class)
    if A.n != params.n:
        raise ValueError("instance and parameters disagree on n")
    nb = _Neighbourhood(A.n, A.members)
    trace: list[DiscardStep] = []
    while True:
        found = _find_violator(nb, params, search)
        if found is None:
            break
        S, u = found
        nb.remove(S)
        trace.append(DiscardStep(S, u, params.unique_threshold(len(S))))
    return VertexSet._trusted(A.n, frozenset(nb.B)), trace


def deletion_accounting(A: VertexSet, trace: list[DiscardStep]) -> tuple[int, int, bool]:
    """Recompute |Γ(A)| = Σ|Γ(L_i) \\ Γ(B_{i-1} \\ L_i)| + |Γ(B_m)| from scratch.

    Returns (|Γ(A)|, right-hand side, whether every recorded count matched).
    """
    n = A.n
    B = set(A.members)
    total = 0
    matched = True
    for step in trace:
        L = set(step.removed)
        u = len(gamma_masks(n, L) - gamma_masks(n, B - L))
        matched &= u == step.unique
        total += u
        B -= L
    total += len(gamma_masks(n, B))
    return len(gamma(A)), total, matched


class CenterResult(NamedTuple):
    w: Vertex
    overlap: int
    certified: bool


def _walsh_hadamard(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64, copy=True)
    h = 1
    while h < x.size:
        view = x.reshape(-1, 2, h)
        top = view[:, 0, :].copy()
        view[:, 0, :] += view[:, 1, :]
        view[:, 1, :] = top - view[:, 1, :]
        h *= 2
    return x


def sphere_overlaps(A: VertexSet, k: int) -> np.ndarray:
    """|Γ^k(w) ∩ A| for every vertex w, as an XOR-convolution."""
    n = A.n
    if n > EXACT_CENTER_MAX_N:
        raise ValueError(f"exact centre search is limited to n <= {EXACT_CENTER_MAX_N}")
    size = 1 << n
    ind = np.zeros(size, dtype=np.int64)
    if len(A):
        ind[np.fromiter(A.members, dtype=np.int64, count=len(A))] = 1
    sphere = (np.bitwise_count(np.arange(size, dtype=np.uint32)) == k).astype(np.int64)
    return _walsh_hadamard(_walsh_hadamard(ind) * _walsh_hadamard(sphere)) >> n


def _overlaps_at(arr: np.ndarray, cands: np.ndarray, k: int) -> np.ndarray:
    return (np.bitwise_count(arr[None, :] ^ cands[:, None]) == k).sum(axis=1)


def _hill_climb(A: VertexSet, k: int, seed: int, restarts: int) -> tuple[int, int]:
    n = A.n
    arr = np.array(A.sorted, dtype=np.uint64)
    moves = [1 << i for i in range(n)]
    moves += [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)]
    moves = np.array(moves, dtype=np.uint64)
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(arr), size=min(restarts, len(arr)), replace=False)
    best = (-1, 0)
    for a in picks:
        w = int(arr[a])
        for i in rng.choice(n, size=min(k, n), replace=False):
            w ^= 1 << int(i)
        score = int(_overlaps_at(arr, np.array([w], dtype=np.uint64), k)[0])
        while True:
            cands = np.uint64(w) ^ moves
            scores = _overlaps_at(arr, cands, k)
            top = int(scores.max())
            if top <= score:
                break
            w = int(cands[scores == top].min())
            score = top
        if score > best[0] or (score == best[0] and w < best[1]):
            best = (score, w)
    return best[1], best[0]


def best_center(A: VertexSet, k: int, mode: str = "exact", seed: int = 0,
                restarts: int = 16) -> CenterResult:
    """A vertex w maximising |Γ^k(w) ∩ A|.

    ``exact`` scans all 2^n vertices (n <= 24); ties go to the lowest mask.
    ``heuristic`` hill-climbs from seeds at distance k from sampled members
    of A, moving by one or two coordinate flips, and is not certified.
    """
    n = A.n
    if mode == "exact":
        over = sphere_overlaps(A, k)
        w = int(np.argmax(over))
        return CenterResult(Vertex(n, w), int(over[w]), True)
    if mode == "heuristic":
        if n > 63:
            raise ValueError("heuristic centre search supports n <= 63")
        if not len(A):
            return CenterResult(Vertex(n, 0), 0, False)
        w, score = _hill_climb(A, k, seed, restarts)
        return CenterResult(Vertex(n, w), score, False)
    raise ValueError(f"unknown centre mode {mode!r}")


def place_far_centers(n: int, k: int, count: int, w: Vertex, max_tries: int = 1 << 22
                      ) -> list[Vertex]:
    """Greedy packing of ``count`` vertices at mutual distance >= 2k+3 from w and each other.

    Candidates are scanned outward from the antipode of ``w``.
    """
    gap = 2 * k + 3
    chosen = [w.bits]
    antipode = w.bits ^ ((1 << n) - 1)
    for y in range(min(1 << n, max_tries)):
        if len(chosen) == count + 1:
            break
        c = antipode ^ y
        if all((c ^ x).bit_count() >= gap for x in chosen):
            chosen.append(c)
    if len(chosen) < count + 1:
        raise ValueError(f"could not place {count} centres at distance >= {gap} in Q_{n}")
    return [Vertex(n, c) for c in chosen[1:]]


def sharpness_example(n: int, k: int, p_int: int, w: Vertex, far_centers: list[Vertex]
                      ) -> VertexSet:
    """A sphere Γ^k(w) with p_int·C(n,k-1) vertices swapped for p_int spheres Γ^{k-1}(u).

    The dropped sphere vertices are the colex-last ones, so what remains of
    Γ^k(w) is a colex initial segment after translating by w.
    """
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    if len(far_centers) != p_int:
        raise ValueError(f"expected {p_int} far centres, got {len(far_centers)}")
    gap = 2 * k + 3
    pts = [w] + list(far_centers)
    for v in pts:
        if v.n != n:
            raise ValueError("centres must lie in Q_n")
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if (pts[a].bits ^ pts[b].bits).bit_count() < gap:
                raise ValueError(f"centres {pts[a]} and {pts[b]} are closer than {gap}")
    keep = comb(n, k) - p_int * comb(n, k - 1)
    if keep < 0:
        raise ValueError(f"p_int·C(n,k-1) = {p_int * comb(n, k - 1)} exceeds C(n,k)")
    members = {w.bits ^ s for s in colex_segment_masks(n, k, keep)}
    for u in far_centers:
        members |= kth_neighbourhood(u, k - 1).members
    return VertexSet._trusted(n, frozenset(members))


def sharpness_instance(n: int, k: int, p_int: int, w: Vertex | None = None
                       ) -> tuple[VertexSet, Vertex, list[Vertex]]:
    w = Vertex(n, 0) if w is None else w
    far = place_far_centers(n, k, p_int, w)
    return sharpness_example(n, k, p_int, w, far), w, far


def neighbourhood_excess(A: VertexSet, k: int) -> Fraction:
    """(|Γ(A)| - C(n,k+1)) / C(n,k): the least p for which A meets the hypothesis."""
    return Fraction(len(gamma(A)) - comb(A.n, k + 1), comb(A.n, k))


def sharpness_params(A: VertexSet, k: int, p_int: int) -> StabilityParams:
    """Parameters for a sharpness instance: p = max(p_int, neighbourhood excess)."""
    p = max(Fraction(p_int), neighbourhood_excess(A, k))
    if p <= 0:
        p = Fraction(1, comb(A.n, k))
    return StabilityParams(A.n, k, p)


@dataclass
class StabilityReport:
    center: Vertex
    overlap: int
    conclusion_rhs: Fraction
    hypothesis_ok: bool
    discard_trace: list[DiscardStep]
    satisfied: bool
    params: StabilityParams
    gamma_size: int = 0
    b_size: int = 0
    discard_rhs: Fraction = Fraction(0)
    center_certified: bool = True
    flags: list[str] = field(default_factory=list)

    @property
    def outliers(self) -> int:
        """|A \\ Γ^k(w)| = |A| - overlap."""
        return comb(self.params.n, self.params.k) - self.overlap

    def to_dict(self) -> dict[str, Any]:
        return jsonable({
            "center": self.center, "center_hex": hex(self.center.bits),
            "center_certified": self.center_certified, "overlap": self.overlap,
            "outliers": self.outliers, "conclusion_rhs": self.conclusion_rhs,
            "satisfied": self.satisfied, "hypothesis_ok": self.hypothesis_ok,
            "gamma_size": self.gamma_size, "gamma_budget": self.params.gamma_budget,
            "b_size": self.b_size, "discard_rhs": self.discard_rhs,
            "discard_trace": self.discard_trace, "flags": self.flags,
            "params": self.params.to_dict(),
        })


def stability_report(A: VertexSet, params: StabilityParams,
                     search_class: SearchClass | str = SearchClass.SINGLETONS,
                     center_mode: str = "auto", seed: int = 0) -> StabilityReport:
    n, k = params.n, params.k
    if A.n != n or len(A) != comb(n, k):
        raise ValueError(f"need |A| = C({n},{k}) = {comb(n, k)} in Q_{n}, got {len(A)} in Q_{A.n}")
    gamma_size = len(gamma(A))
    ok = gamma_size <= params.gamma_budget
    B, trace = discard_algorithm(A, params, search_class)
    if center_mode == "auto":
        center_mode = "exact" if n <= EXACT_CENTER_MAX_N else "heuristic"
    center = best_center(A, k, center_mode, seed=seed)
    rhs = comb(n, k) - params.error_allowance
    flags = params.warnings()
    if not ok:
        flags.append("neighbourhood-bound-violated")
    if flags:
        flags.append("theorem-hypotheses-unmet")
    return StabilityReport(
        center=center.w, overlap=center.overlap, conclusion_rhs=rhs, hypothesis_ok=ok,
        discard_trace=trace, satisfied=center.overlap >= rhs, params=params,
        gamma_size=gamma_size, b_size=len(B), discard_rhs=comb(n, k) - params.discard_allowance,
        center_certified=center.certified, flags=flags)


@dataclass
class HPartition:
    groups: dict[int, list[int]]
    unassigned: list[int]
    threshold: Fraction


def h_partition(B: VertexSet, params: StabilityParams) -> HPartition:
    """Group v ∈ B by the least j <= k with |B ∩ Γ^{2j}(v)| >= |B| - C·C(n,k-1)·p·k."""
    k = params.k
    threshold = len(B) - params.error_allowance
    members = list(B)
    groups: dict[int, list[int]] = {}
    unassigned: list[int] = []
    if B.n <= 63 and members:
        arr = np.array(members, dtype=np.uint64)
        for v in members:
            hist = np.bincount(np.bitwise_count(arr ^ np.uint64(v)), minlength=B.n + 1)
            _assign(v, hist, k, threshold, groups, unassigned)
    else:
        for v in members:
            hist = [0] * (B.n + 1)
            for x in members:
                hist[(x ^ v).bit_count()] += 1
            _assign(v, hist, k, threshold, groups, unassigned)
    return HPartition(groups, unassigned, threshold)


def _assign(v, hist, k, threshold, groups, unassigned):
    for j in range(k + 1):
        if 2 * j < len(hist) and hist[2 * j] >= threshold:
            groups.setdefault(j, []).append(v)
            return
    unassigned.append(v)


def h_distance_violations(part: HPartition, k: int) -> list[tuple[int, int, int]]:
    """Pairs u, w in the same H(j), j < k, at distance exactly 2j."""
    out = []
    for j, vs in sorted(part.groups.items()):
        if j >= k:
            continue
        for a in range(len(vs)):
            for b in range(a + 1, len(vs)):
                if (vs[a] ^ vs[b]).bit_count() == 2 * j:
                    out.append((vs[a], vs[b], j))
    return out


def cleaning_check(B: VertexSet, u: Vertex, ell: int, params: StabilityParams) -> BoundReport:
    """Compare |B ∩ Γ^ℓ(u)| with C(n,k) - C·C(n,k-1)·p·k when ℓ ∈ [k, 2k].

    ``params["premise"]`` records whether |B ∩ Γ^ℓ(u)| >= (65k³/n)·C(n,k).
    """
    n, k = params.n, params.k
    if not k <= ell <= 2 * k:
        raise ValueError(f"need k <= ell <= 2k, got ell={ell}")
    hit = sphere_overlap(B, u.bits, ell)
    premise = hit * n >= 65 * k ** 3 * comb(n, k)
    return BoundReport(hit, comb(n, k) - params.error_allowance,
                       {"n": n, "k": k, "ell": ell, "u": str(u), "premise": premise})
