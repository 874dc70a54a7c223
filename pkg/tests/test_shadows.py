import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from harperlab.cube import (
    SetFamily, Vertex, VertexSet, closed_neighbourhood, gamma, kth_neighbourhood, layer,
    layer_masks,
)
from harperlab.orderings import colex_initial_segment, complement_family, lex_initial_segment
from harperlab.shadows import (
    band_interval, binom, expansion_check, few_uniques_status, find_band_index,
    harper_gamma_lower, harper_min_closed, kk_factor, kk_factor_monotone_check,
    kk_refined_bound, kruskbound_factor, kruskbound_lhs, lym_shadow_bound, lym_upper_bound,
    shadow, upper_shadow, weighted_sum_identity,
)


def fam(n, r, sets):
    return SetFamily.of(n, r, sets)


def oracle_shadow(F):
    out = set()
    for A in F.sets():
        for x in A:
            out.add(A - {x})
    return out


def oracle_upper(F):
    out = set()
    for A in F.sets():
        for x in set(range(1, F.n + 1)) - A:
            out.add(A | {x})
    return out


@st.composite
def families(draw, max_n=9, min_r=0, top_gap=0):
    n = draw(st.integers(max(1, min_r + top_gap), max_n))
    r = draw(st.integers(min_r, n - top_gap))
    members = draw(st.sets(st.sampled_from(list(layer_masks(n, r)))))
    return SetFamily._trusted(n, r, frozenset(members))


# -- shadows ------------------------------------------------------------------

def test_shadow_examples():
    assert shadow(fam(5, 3, [[1, 2, 3]])) == fam(5, 2, [[1, 2], [1, 3], [2, 3]])
    for n in range(1, 7):
        for r in range(1, n + 1):
            assert shadow(layer(n, r)).members == layer(n, r - 1).members
    seg = colex_initial_segment(5, 3, 4)
    assert seg == fam(5, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
    assert shadow(seg) == fam(5, 2, itertools.combinations(range(1, 5), 2))
    with pytest.raises(ValueError):
        shadow(layer(4, 0))


def test_upper_shadow_examples():
    assert upper_shadow(layer(4, 0)).members == layer(4, 1).members
    got = upper_shadow(lex_initial_segment(6, 2, 5))
    assert len(got) == 10 and all(1 in s for s in got.sets())
    with pytest.raises(ValueError):
        upper_shadow(layer(4, 4))


@given(families(min_r=1))
def test_shadow_matches_oracle(F):
    assert set(map(frozenset, shadow(F).sets())) == oracle_shadow(F)


@given(families(top_gap=1))
def test_upper_shadow_matches_oracle_and_duality(F):
    up = upper_shadow(F)
    assert set(map(frozenset, up.sets())) == oracle_upper(F)
    assert up == complement_family(shadow(complement_family(F)))


def test_binom_edge_cases():
    assert binom(5, 2) == 10
    assert binom(-1, 0) == binom(3, -1) == binom(3, 4) == 0


# -- Harper / Kruskal-Katona oracles at tiny scale ----------------------------

def test_harper_min_closed_examples():
    for n in range(1, 6):
        assert harper_min_closed(n, 1 << n) == 1 << n
    assert harper_min_closed(3, 4) == 7
    assert harper_min_closed(4, 1) == 5


def test_harper_min_closed_is_brute_minimum_n3():
    best = {}
    for bits in range(1 << 8):
        D = VertexSet(3, frozenset(v for v in range(8) if bits >> v & 1))
        c = len(closed_neighbourhood(D))
        best[len(D)] = min(best.get(len(D), 99), c)
    for l in range(9):
        assert best[l] == harper_min_closed(3, l)


def test_colex_minimises_shadow_by_brute_force():
    for n in range(1, 5):
        for r in range(1, n + 1):
            masks = list(layer_masks(n, r))
            for m in range(len(masks) + 1):
                best = min(len(shadow(SetFamily._trusted(n, r, frozenset(c))))
                           for c in itertools.combinations(masks, m))
                assert best == len(shadow(colex_initial_segment(n, r, m)))


# -- LYM --------------------------------------------------------------------

def test_lym_examples():
    for n in range(1, 7):
        for r in range(1, n):
            assert lym_shadow_bound(n, r, comb(n, r)) == comb(n, r - 1)
            assert lym_upper_bound(n, r, comb(n, r)) == comb(n, r + 1)
    assert lym_shadow_bound(5, 3, 4) == 4
    masks = list(layer_masks(5, 3))
    true_min = min(len(shadow(SetFamily._trusted(5, 3, frozenset(c))))
                   for c in itertools.combinations(masks, 4))
    assert true_min == 6
    assert lym_upper_bound(6, 2, 5) == Fraction(20, 3)
    masks = list(layer_masks(6, 2))
    true_min = min(len(upper_shadow(SetFamily._trusted(6, 2, frozenset(c))))
                   for c in itertools.combinations(masks, 5))
    assert true_min == 10


@given(families(min_r=1, top_gap=1))
def test_local_lym_both_sides(F):
    n, r, m = F.n, F.r, len(F)
    assert len(shadow(F)) >= lym_shadow_bound(n, r, m)
    assert len(upper_shadow(F)) >= lym_upper_bound(n, r, m)


def test_lym_rejects_bad_sizes():
    with pytest.raises(ValueError):
        lym_shadow_bound(5, 2, 11)
    with pytest.raises(ValueError):
        lym_shadow_bound(5, 0, 1)
    with pytest.raises(ValueError):
        lym_upper_bound(5, 5, 1)


# -- Harper-derived neighbourhood bound -----------------------------------

def test_harper_gamma_lower_examples():
    assert harper_gamma_lower(10, 1, 10) == 30
    singles = kth_neighbourhood(Vertex(10, 0), 1)
    assert len(gamma(singles)) == 46
    for n, k in ((6, 2), (8, 3), (10, 1)):
        assert harper_gamma_lower(n, k, 0) == -2 * comb(n, k)
    with pytest.raises(ValueError):
        harper_gamma_lower(5, 1, 6)


def test_harper_gamma_lower_brute_n3():
    n = 3
    for k in (1, 2):
        for bits in range(1 << 8):
            B = VertexSet(n, frozenset(v for v in range(8) if bits >> v & 1))
            if len(B) <= comb(n, k):
                assert len(gamma(B)) >= harper_gamma_lower(n, k, len(B))


# -- bands and the refined bound ------------------------------------------

def test_find_band_index_examples():
    assert find_band_index(6, 2, 1).i == 1
    b = find_band_index(6, 2, 5)
    assert (b.i, b.lo, b.hi) == (1, 1, 5)
    assert find_band_index(6, 2, 6).i == 2
    with pytest.raises(ValueError):
        find_band_index(6, 2, 0)
    with pytest.raises(ValueError):
        find_band_index(6, 2, 16)


def test_bands_partition_the_sizes():
    for n in range(1, 13):
        for r in range(0, n + 1):
            for m in range(1, comb(n, r) + 1):
                # linear-scan oracle over the interval definition
                want = next(i for i in range(1, n + 2)
                            if comb(n, r) - binom(n - i + 1, r) + 1 <= m <= comb(n, r) - binom(n - i, r))
                b = find_band_index(n, r, m)
                assert b.i == want
                assert (b.lo, b.hi) == band_interval(n, r, want)


def test_kk_refined_examples():
    assert kk_refined_bound(6, 2, 1, 5) == 10
    assert len(upper_shadow(lex_initial_segment(6, 2, 5))) == 10
    # the full layer sits in band n - r + 1
    for n in range(2, 10):
        for r in range(1, n):
            top = comb(n, r)
            assert find_band_index(n, r, top).i == n - r + 1
            assert kk_refined_bound(n, r, n - r + 1, top) == comb(n, r + 1)
    with pytest.raises(ValueError):
        kk_refined_bound(6, 2, 4, 15)


def test_refined_bound_against_lex_segments_and_lym():
    for n in range(1, 11):
        for r in range(0, n):
            for m in range(1, comb(n, r) + 1):
                i = find_band_index(n, r, m).i
                bound = kk_refined_bound(n, r, i, m)
                actual = len(upper_shadow(lex_initial_segment(n, r, m)))
                assert bound <= actual
                assert bound >= lym_upper_bound(n, r, m)
                if m == band_interval(n, r, i)[1]:
                    assert bound == actual


def test_refined_bound_against_all_families_small():
    # lex segments minimise the upper shadow, so the bound covers every family
    for n in range(2, 6):
        for r in range(0, n):
            masks = list(layer_masks(n, r))
            for m in range(1, len(masks) + 1):
                bound = kk_refined_bound(n, r, find_band_index(n, r, m).i, m)
                best = min(len(upper_shadow(SetFamily._trusted(n, r, frozenset(c))))
                           for c in itertools.combinations(masks, m))
                assert best >= bound


def test_kk_factor_monotone_examples():
    assert kk_factor_monotone_check(10, 3, 10)
    assert kk_factor(6, 2, 1) == 2
    assert kk_factor(6, 2, 2) == Fraction(16, 9)
    for n in range(4, 15):
        for r in range(1, n):
            plateau = Fraction(comb(n, r + 1), comb(n, r))
            for i in range(n - r + 1, n + 3):
                assert kk_factor(n, r, i) == plateau


def test_weighted_sum_identity_grid():
    for n in range(1, 20):
        for r in range(0, n + 1):
            for i in range(0, n + 2):
                assert weighted_sum_identity(n, r, i)


# -- cleaned factor ---------------------------------------------------------

def test_kruskbound_examples():
    lhs, c = kruskbound_lhs(10, 1, 5)
    assert (lhs, c) == (7, Fraction(1, 2))
    assert kruskbound_factor(10, 1, c) == Fraction(27, 4)
    # as c -> 1 the factor approaches the plain LYM ratio
    n, r = 30, 4
    near = kruskbound_factor(n, r, 1 - Fraction(1, 10 ** 9))
    assert abs(near - Fraction(n - r, r + 1)) < Fraction(1, 10 ** 8)
    with pytest.raises(ValueError):
        kruskbound_factor(10, 1, 1)
    with pytest.raises(ValueError):
        kruskbound_lhs(10, 1, 10)


@given(st.integers(2, 40), st.data())
def test_kruskbound_holds(n, data):
    r = data.draw(st.integers(1, min(5, n - 1)))
    a = data.draw(st.integers(r, n - 1))
    lhs, c = kruskbound_lhs(n, r, a)
    assert lhs >= kruskbound_factor(n, r, c)


# -- expansion check --------------------------------------------------------

def test_expansion_check_vacuous():
    J = kth_neighbourhood(Vertex(10, 0), 4)
    rep = expansion_check(J, Vertex(10, 0), 1, 2)
    assert rep.params["layer_j"] == 0
    assert rep.lhs == 0 and rep.rhs == 0 and rep.holds


def test_expansion_check_full_layer():
    n, k, j = 12, 3, 1
    v = Vertex(n, 0)
    J = kth_neighbourhood(v, j)
    rep = expansion_check(J, v, j, k, assume_hypothesis=True)
    assert rep.lhs == 0
    assert rep.rhs == Fraction(n, 64 * k ** 3) * comb(n, j)
    assert rep.params["rhs_tight"] == Fraction(n, 16 * k * (k + 1) ** 2) * comb(n, j)
    assert rep.params["upper_shadow"] == comb(n, j + 1)
    assert rep.params["hypothesis"] == "assumed"


def test_expansion_check_random_q12_reports_sign():
    rng = random.Random(7)
    n, k, j = 12, 2, 2
    v = Vertex(n, 0)
    for _ in range(5):
        J = VertexSet(n, frozenset(rng.sample(range(1 << n), 40)))
        rep = expansion_check(J, v, j, k)
        assert rep.slack == rep.lhs - rep.rhs
        assert rep.params["hypothesis"] in ("verified-singletons", "violated")
        d = rep.to_dict()
        assert set(d) == {"lhs", "rhs", "slack", "params"}


def test_few_uniques_status():
    n = 12
    # a full sphere: every vertex shares all its neighbours
    J = kth_neighbourhood(Vertex(n, 0), 2)
    assert few_uniques_status(J, 2) == "verified-singletons"
    # an isolated point has n unique neighbours > n/(k+1)(1+1/8k)
    assert few_uniques_status(VertexSet(n, frozenset({0})), 2) == "violated"
    small = VertexSet(n, frozenset(list(J)[:10]))
    assert few_uniques_status(small, 2) in ("verified-all-subsets", "violated")


def test_expansion_check_rejects_bad_j():
    J = VertexSet(6, frozenset({0}))
    with pytest.raises(ValueError):
        expansion_check(J, Vertex(6, 0), 5, 2)
