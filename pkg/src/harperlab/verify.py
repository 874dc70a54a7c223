"""Exhaustive and sampled verifiers, one per checked statement.

Each verifier returns a :class:`VerificationRun`.  Brute-force sides
enumerate subsets as bitmasks with numpy and never call the operator being
checked, so a failure always comes with a witness that can be replayed
through the library.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable

import numpy as np

from .cube import SetFamily, format_set, layer_masks
from .orderings import (
    colex_initial_segment, colex_reversed_initial_segment, complement_family,
    lex_initial_segment, lex_segment_masks,
)
from .shadows import (
    find_band_index, harper_min_closed, kk_factor_monotone_check, kk_refined_bound,
    kruskbound_factor, kruskbound_lhs, lym_upper_bound, shadow, upper_shadow,
    weighted_sum_identity,
)
from .stability import (
    deletion_accounting, discard_algorithm, sharpness_instance, sharpness_params,
    stability_report,
)

HARPER_EXHAUSTIVE_MAX_N = 4
KK_EXHAUSTIVE_MAX_LAYER = 20
SAMPLED_MAX_N = 16


class ScaleError(ValueError):
    """Requested scope exceeds a hard-coded desk-scale limit."""


@dataclass
class VerificationRun:
    target: str
    scope: dict[str, Any]
    result: str = "pass"
    checked: int = 0
    witness: dict[str, Any] | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)

    def fail(self, **witness) -> None:
        if self.witness is None:
            self.result = "fail"
            self.witness = witness

    @property
    def passed(self) -> bool:
        return self.result != "fail"

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict[str, Any]:
        from .formats import jsonable
        return jsonable({"target": self.target, "scope": self.scope, "result": self.result,
                         "checked": self.checked, "witness": self.witness,
                         "stats": self.stats})


def _exhaustive(**extra) -> dict[str, Any]:
    return {"kind": "exhaustive", **extra}


def _sampled(count: int, seed: int, **extra) -> dict[str, Any]:
    return {"kind": "sampled", "count": count, "seed": seed, **extra}


# -- Harper ---------------------------------------------------------------

def _flip_masks(n: int) -> list[tuple[int, int]]:
    """(zero-mask, shift) per coordinate for flipping inside a vertex-indexed bitset."""
    N = 1 << n
    out = []
    for i in range(n):
        zero = sum(1 << v for v in range(N) if not v >> i & 1)
        out.append((zero, 1 << i))
    return out


def _bitset_neighbourhood(D: np.ndarray, n: int) -> np.ndarray:
    """Γ(D) for subsets D of V(Q_n) encoded as 2^n-bit integers (n <= 6)."""
    g = np.zeros_like(D)
    for zero, s in _flip_masks(n):
        z = D.dtype.type(zero)
        g |= ((D & z) << D.dtype.type(s)) | ((D >> D.dtype.type(s)) & z)
    return g


def _all_vertex_subsets(n: int) -> np.ndarray:
    if n > HARPER_EXHAUSTIVE_MAX_N:
        raise ScaleError(f"exhaustive enumeration of subsets of Q_n is limited to "
                         f"n <= {HARPER_EXHAUSTIVE_MAX_N}")
    return np.arange(1 << (1 << n), dtype=np.uint64)


def _bitset_members(bits: int) -> list[int]:
    return [v for v in range(bits.bit_length()) if bits >> v & 1]


def verify_harper(n: int, exhaustive: bool = True, samples: int = 0, seed: int = 0,
                  threads: int = 1) -> VerificationRun:
    """|D ∪ Γ(D)| >= |S_ℓ ∪ Γ(S_ℓ)| for |D| = ℓ, with the minimum attained."""
    N = 1 << n
    expected = [harper_min_closed(n, l) for l in range(N + 1)]
    if exhaustive:
        run = VerificationRun("harper", _exhaustive(n=n))
        D = _all_vertex_subsets(n)
        closed = np.bitwise_count(D | _bitset_neighbourhood(D, n)).astype(np.int64)
        sizes = np.bitwise_count(D).astype(np.int64)
        best = np.full(N + 1, N + 1, dtype=np.int64)
        np.minimum.at(best, sizes, closed)
        run.checked = int(D.size)
        for l in range(N + 1):
            if best[l] < expected[l]:
                bad = int(D[np.flatnonzero((sizes == l) & (closed < expected[l]))[0]])
                run.fail(n=n, size=l, vertices=[hex(v) for v in _bitset_members(bad)],
                         closed=int(best[l]), segment_closed=expected[l])
            elif best[l] > expected[l]:
                run.fail(n=n, size=l, reason="segment value not attained by any set",
                         brute_min=int(best[l]), segment_closed=expected[l])
        run.stats = {"min_closed_by_size": best.tolist()}
        return run

    if n > SAMPLED_MAX_N:
        raise ScaleError(f"sampled Harper checks are limited to n <= {SAMPLED_MAX_N}")
    run = VerificationRun("harper", _sampled(samples, seed, n=n))
    perms = [np.arange(N) ^ (1 << i) for i in range(n)]
    exp = np.array(expected, dtype=np.int64)
    chunk = max(1, min(samples, (1 << 22) // N))
    children = np.random.SeedSequence(seed).spawn((samples + chunk - 1) // chunk)

    def work(idx: int):
        rng = np.random.default_rng(children[idx])
        b = min(chunk, samples - idx * chunk)
        q = rng.random(b)
        D = rng.random((b, N)) < q[:, None]
        closed = D.copy()
        for perm in perms:
            closed |= D[:, perm]
        slack = closed.sum(axis=1) - exp[D.sum(axis=1)]
        bad = np.flatnonzero(slack < 0)
        witness = None if bad.size == 0 else np.flatnonzero(D[bad[0]]).tolist()
        return int(slack.min()), witness

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(work, range(len(children))))
    run.checked = samples
    for _, witness in results:
        if witness is not None:
            run.fail(n=n, vertices=[hex(v) for v in witness])
    run.stats = {"min_slack": min((s for s, _ in results), default=0)}
    return run


def verify_cor2(n: int, k: int) -> VerificationRun:
    """|Γ(B)| >= |B|·n/(k+1) - 2·C(n,k) over every B with |B| <= C(n,k)."""
    run = VerificationRun("cor2", _exhaustive(n=n, k=k))
    D = _all_vertex_subsets(n)
    sizes = np.bitwise_count(D).astype(np.int64)
    keep = sizes <= comb(n, k)
    D, sizes = D[keep], sizes[keep]
    open_size = np.bitwise_count(_bitset_neighbourhood(D, n)).astype(np.int64)
    # |Γ(B)|·(k+1) >= |B|·n - 2·C(n,k)·(k+1)
    slack = open_size * (k + 1) - (sizes * n - 2 * comb(n, k) * (k + 1))
    run.checked = int(D.size)
    bad = np.flatnonzero(slack < 0)
    if bad.size:
        run.fail(n=n, k=k, vertices=[hex(v) for v in _bitset_members(int(D[bad[0]]))])
    run.stats = {"min_slack": str(Fraction(int(slack.min()), k + 1))}
    return run


# -- layer families -------------------------------------------------------

def _layer_index(n: int, r: int) -> dict[int, int]:
    return {m: j for j, m in enumerate(layer_masks(n, r))}


def _family_tables(n: int, r: int) -> dict[str, np.ndarray]:
    """Sizes and shadow sizes of every family F ⊆ [n]^(r), indexed by family mask."""
    members = list(layer_masks(n, r))
    L = len(members)
    if L > KK_EXHAUSTIVE_MAX_LAYER:
        raise ScaleError(f"exhaustive family enumeration needs C(n,r) <= "
                         f"{KK_EXHAUSTIVE_MAX_LAYER}, got C({n},{r}) = {L}")
    out = {"size": np.bitwise_count(np.arange(1 << L, dtype=np.uint32)).astype(np.int64)}
    for name, rr, subs in (("lower", r - 1, lambda m: [m ^ (1 << b) for b in range(n) if m >> b & 1]),
                           ("upper", r + 1, lambda m: [m | (1 << b) for b in range(n)
                                                        if not m >> b & 1])):
        if not 0 <= rr <= n:
            continue
        idx = _layer_index(n, rr)
        single = [sum(1 << idx[x] for x in subs(m)) for m in members]
        table = np.zeros(1 << L, dtype=np.uint64)
        for j, s in enumerate(single):
            table[1 << j: 2 << j] = table[: 1 << j] | np.uint64(s)
        out[name] = np.bitwise_count(table).astype(np.int64)
    return out


def verify_kk(ns: list[int], rs: list[int] | None = None) -> VerificationRun:
    """Colex initial segments minimise the shadow, over every family of every size."""
    run = VerificationRun("kk", _exhaustive(n=ns, r=rs or "all"))
    layers = []
    for n in ns:
        for r in (rs or range(1, n + 1)):
            if 1 <= r <= n:
                layers.append((n, r))
    for n, r in layers:
        if comb(n, r) > KK_EXHAUSTIVE_MAX_LAYER:
            raise ScaleError(f"kk exhaustive needs C(n,r) <= {KK_EXHAUSTIVE_MAX_LAYER}, "
                             f"got C({n},{r}) = {comb(n, r)}")
    per_layer = {}
    for n, r in layers:
        t = _family_tables(n, r)
        L = comb(n, r)
        best = np.full(L + 1, 1 << 30, dtype=np.int64)
        np.minimum.at(best, t["size"], t["lower"])
        run.checked += 1 << L
        for m in range(L + 1):
            seg = len(shadow(colex_initial_segment(n, r, m)))
            if best[m] != seg:
                members = list(layer_masks(n, r))
                hits = np.flatnonzero((t["size"] == m) & (t["lower"] == best[m]))
                fam = [format_set(members[j]) for j in range(L) if int(hits[0]) >> j & 1]
                run.fail(n=n, r=r, size=m, family=fam, shadow=int(best[m]), segment_shadow=seg)
        per_layer[f"{n},{r}"] = best.tolist()
    run.stats = {"min_shadow_by_size": per_layer}
    return run


def _lym_violations(size, count, n, r, other):
    """Indices where count/C(n,other) < size/C(n,r), via cross-multiplication."""
    return np.flatnonzero(count * comb(n, r) < size * comb(n, other))


def verify_lym_exhaustive(ns: list[int], rs: list[int] | None = None) -> VerificationRun:
    run = VerificationRun("lym", _exhaustive(n=ns, r=rs or "all"))
    for n in ns:
        for r in (rs or range(0, n + 1)):
            if not 0 <= r <= n:
                continue
            t = _family_tables(n, r)
            run.checked += int(t["size"].size)
            for name, other in (("lower", r - 1), ("upper", r + 1)):
                if name not in t:
                    continue
                bad = _lym_violations(t["size"], t[name], n, r, other)
                if bad.size:
                    members = list(layer_masks(n, r))
                    fam = [format_set(members[j]) for j in range(len(members))
                           if int(bad[0]) >> j & 1]
                    run.fail(n=n, r=r, side=name, family=fam)
    return run


def _incidence(n: int, r: int, up: bool) -> np.ndarray:
    """Member-by-target 0/1 matrix of the (upper) shadow map, built from the library."""
    rows = list(layer_masks(n, r))
    idx = _layer_index(n, r + 1 if up else r - 1)
    op = upper_shadow if up else shadow
    M = np.zeros((len(rows), len(idx)), dtype=np.int32)
    for j, m in enumerate(rows):
        for x in op(SetFamily._trusted(n, r, frozenset([m]))).members:
            M[j, idx[x]] = 1
    return M


def verify_lym_sampled(n_max: int, samples: int, seed: int = 0,
                       threads: int = 1) -> VerificationRun:
    """Both local LYM inequalities on random families with n <= n_max."""
    if n_max > SAMPLED_MAX_N:
        raise ScaleError(f"sampled LYM checks are limited to n <= {SAMPLED_MAX_N}")
    run = VerificationRun("lym", _sampled(samples, seed, n_max=n_max))
    shapes = [(n, r) for n in range(1, n_max + 1) for r in range(n + 1)]
    ss = np.random.SeedSequence(seed)
    counts = np.random.default_rng(ss.spawn(1)[0]).multinomial(samples, [1 / len(shapes)] * len(shapes))
    children = ss.spawn(len(shapes))

    def work(idx: int):
        n, r = shapes[idx]
        total = int(counts[idx])
        rng = np.random.default_rng(children[idx])
        L = comb(n, r)
        mats = {}
        if r >= 1:
            mats["lower"] = (_incidence(n, r, up=False), r - 1)
        if r < n:
            mats["upper"] = (_incidence(n, r, up=True), r + 1)
        witness = None
        done = 0
        while done < total:
            b = min(total - done, 20000)
            q = rng.random(b)
            F = (rng.random((b, L)) < q[:, None]).astype(np.int32)
            size = F.sum(axis=1)
            for name, (M, other) in mats.items():
                cnt = ((F @ M) > 0).sum(axis=1)
                bad = _lym_violations(size, cnt, n, r, other)
                if bad.size and witness is None:
                    fam = [format_set(m) for m, bit in zip(layer_masks(n, r), F[bad[0]]) if bit]
                    witness = {"n": n, "r": r, "side": name, "family": fam}
            done += b
        return witness

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        witnesses = list(pool.map(work, range(len(shapes))))
    run.checked = samples
    for w in witnesses:
        if w is not None:
            run.fail(**w)
    return run


# -- exact-rational sweeps ------------------------------------------------

def verify_lemma3(ns: list[int], rows: bool = False) -> VerificationRun:
    """Refined bound <= |∂⁺(lex segment)|, equality at band ends, >= plain LYM."""
    run = VerificationRun("lemma3", _exhaustive(n=ns))
    attained = 0
    for n in ns:
        for r in range(n):
            seg_shadow: set[int] = set()
            full = (1 << n) - 1
            for m, x in enumerate(lex_segment_masks(n, r, comb(n, r)), start=1):
                rest = full ^ x
                while rest:
                    low = rest & -rest
                    seg_shadow.add(x | low)
                    rest ^= low
                band = find_band_index(n, r, m)
                bound = kk_refined_bound(n, r, band.i, m)
                actual = len(seg_shadow)
                run.checked += 1
                if rows:
                    run.rows.append({"n": n, "r": r, "i": band.i, "m": m, "bound": bound,
                                     "upper_shadow": actual, "slack": actual - bound})
                if bound > actual:
                    run.fail(n=n, r=r, i=band.i, m=m, bound=bound, upper_shadow=actual)
                if m == band.hi:
                    if bound != actual:
                        run.fail(n=n, r=r, i=band.i, m=m, reason="band end not attained",
                                 bound=bound, upper_shadow=actual)
                    attained += 1
                if bound < lym_upper_bound(n, r, m):
                    run.fail(n=n, r=r, i=band.i, m=m, reason="weaker than local LYM")
            for i in range(1, n - r + 2):
                if not weighted_sum_identity(n, r, i):
                    run.fail(n=n, r=r, i=i, reason="weighted-sum identity")
    run.stats = {"band_ends_attained": attained}
    return run


def verify_cor_monotone(ns: list[int], r_max: int, rows: bool = False) -> VerificationRun:
    run = VerificationRun("cor_monotone", _exhaustive(n=ns, r_max=r_max))
    for n in ns:
        for r in range(1, min(r_max, n) + 1):
            ok = kk_factor_monotone_check(n, r, n + 2)
            run.checked += 1
            if rows:
                run.rows.append({"n": n, "r": r, "i_max": n + 2, "monotone": ok})
            if not ok:
                run.fail(n=n, r=r)
    return run


def verify_lemma4(ns: list[int], r_max: int, rows: bool = False) -> VerificationRun:
    run = VerificationRun("lemma4", _exhaustive(n=ns, r_max=r_max))
    worst = None
    for n in ns:
        for r in range(1, min(r_max, n) + 1):
            for a in range(r, n):
                lhs, c = kruskbound_lhs(n, r, a)
                rhs = kruskbound_factor(n, r, c)
                run.checked += 1
                if rows:
                    run.rows.append({"n": n, "r": r, "a": a, "c": c, "lhs": lhs, "rhs": rhs,
                                     "slack": lhs - rhs})
                if worst is None or lhs - rhs < worst[0]:
                    worst = (lhs - rhs, n, r, a)
                if lhs < rhs:
                    run.fail(n=n, r=r, a=a, lhs=lhs, rhs=rhs)
    if worst:
        run.stats = {"min_slack": worst[0], "at": {"n": worst[1], "r": worst[2], "a": worst[3]}}
    return run


# -- duality --------------------------------------------------------------

def verify_duality(n_max: int, samples: int, seed: int = 0) -> VerificationRun:
    """∂⁺F = (∂(F^c))^c on random families, and the lex/reversed-colex segment duality."""
    run = VerificationRun("duality", _sampled(samples, seed, n_max=n_max, segments="all"))
    rng = np.random.default_rng(seed)
    layers = {}
    for _ in range(samples):
        n = int(rng.integers(1, n_max + 1))
        r = int(rng.integers(0, n))
        if (n, r) not in layers:
            layers[(n, r)] = np.array(list(layer_masks(n, r)), dtype=object)
        pool = layers[(n, r)]
        pick = pool[rng.random(len(pool)) < rng.random()]
        F = SetFamily._trusted(n, r, frozenset(int(x) for x in pick))
        if upper_shadow(F) != complement_family(shadow(complement_family(F))):
            run.fail(n=n, r=r, family=[format_set(m) for m in F])
        run.checked += 1
    segs = 0
    for n in range(1, n_max + 1):
        for r in range(n + 1):
            for m in range(comb(n, r) + 1):
                lhs = complement_family(lex_initial_segment(n, r, m))
                if lhs != colex_reversed_initial_segment(n, n - r, m):
                    run.fail(n=n, r=r, m=m, reason="segment duality")
                segs += 1
    run.stats = {"segments_checked": segs}
    return run


# -- stability ------------------------------------------------------------

DEFAULT_STABILITY_CASES = [(12, 2, 1), (16, 2, 1), (16, 2, 2), (20, 3, 1)]


def check_stability_case(n: int, k: int, p_int: int, seed: int = 0) -> dict[str, Any]:
    A, w, far = sharpness_instance(n, k, p_int)
    params = sharpness_params(A, k, p_int)
    rep = stability_report(A, params, seed=seed)
    B, trace = discard_algorithm(A, params)
    gamma_a, accounted, matched = deletion_accounting(A, trace)
    expected_outliers = p_int * comb(n, k - 1)
    checks = {
        "hypothesis_ok": rep.hypothesis_ok,
        "satisfied": rep.satisfied,
        "outliers_exact": rep.outliers == expected_outliers,
        "center_recovered": rep.center == w,
        "accounting": gamma_a == accounted and matched,
        "discard_bound": len(B) >= rep.discard_rhs,
    }
    return {"n": n, "k": k, "p_int": p_int, "p": params.p, "center": rep.center,
            "expected_center": w, "overlap": rep.overlap, "outliers": rep.outliers,
            "expected_outliers": expected_outliers, "conclusion_rhs": rep.conclusion_rhs,
            "gamma_size": rep.gamma_size, "b_size": len(B), "discard_rhs": rep.discard_rhs,
            "flags": rep.flags, "checks": checks}


def verify_stability(cases: list[tuple[int, int, int]] | None = None,
                     seed: int = 0) -> VerificationRun:
    cases = cases or DEFAULT_STABILITY_CASES
    run = VerificationRun("stability", _exhaustive(cases=[list(c) for c in cases]))
    out = []
    for n, k, p_int in cases:
        if n > 24:
            raise ScaleError("stability verification uses exact centre search, n <= 24")
        case = check_stability_case(n, k, p_int, seed)
        out.append(case)
        run.checked += 1
        failed = [name for name, ok in case["checks"].items() if not ok]
        if failed:
            run.fail(n=n, k=k, p_int=p_int, failed=failed)
    run.stats = {"cases": out}
    return run


TARGETS: dict[str, Callable[..., VerificationRun]] = {
    "harper": verify_harper,
    "kk": verify_kk,
    "lym": verify_lym_exhaustive,
    "lemma3": verify_lemma3,
    "lemma4": verify_lemma4,
    "cor_monotone": verify_cor_monotone,
    "cor2": verify_cor2,
    "duality": verify_duality,
    "stability": verify_stability,
}
