import functools
import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from harperlab.cube import SetFamily, VertexSet, layer, layer_masks, to_mask, to_set
from harperlab.orderings import (
    OrderKind, colex_compare, colex_rank, colex_reversed_initial_segment, colex_unrank,
    complement_family, initial_segment, lex_compare, lex_initial_segment, lex_rank,
    lex_unrank, rank, reverse_alphabet, simplicial_compare, simplicial_initial_segment,
    unrank,
)


def names(masks):
    return ["".join(str(i) for i in sorted(to_set(m))) for m in masks]


# plain-set oracles, straight from the definitions
def oracle_lex(a, b):
    A, B = to_set(a), to_set(b)
    if A == B:
        return 0
    return -1 if min(A ^ B) in A else 1


def oracle_colex(a, b):
    A, B = to_set(a), to_set(b)
    if A == B:
        return 0
    return -1 if max(A ^ B) in B else 1


def oracle_simplicial(a, b):
    if len(to_set(a)) != len(to_set(b)):
        return -1 if len(to_set(a)) < len(to_set(b)) else 1
    return oracle_lex(a, b)


def all_subsets(n):
    return list(range(1 << n))


@st.composite
def layer_pairs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(0, n))
    a = draw(st.sets(st.integers(1, n), min_size=r, max_size=r))
    b = draw(st.sets(st.integers(1, n), min_size=r, max_size=r))
    return n, to_mask(a), to_mask(b)


# -- comparators --------------------------------------------------------------

def test_lex_examples():
    a = to_mask([1, 4])
    assert lex_compare(a, a) == 0
    assert lex_compare(to_mask([1, 4]), to_mask([2, 3])) < 0
    got = sorted(layer(4, 2).members, key=functools.cmp_to_key(lex_compare))
    assert names(got) == ["12", "13", "14", "23", "24", "34"]


def test_colex_examples():
    assert colex_compare(to_mask([1, 2, 3]), to_mask([1, 2, 3])) == 0
    assert colex_compare(to_mask([1, 2, 3]), to_mask([1, 2, 4])) < 0
    got = sorted(layer(5, 3).members, key=functools.cmp_to_key(colex_compare))
    assert names(got) == ["123", "124", "134", "234", "125", "135", "235", "145", "245", "345"]


def test_simplicial_examples():
    assert simplicial_compare(0, to_mask([2])) < 0
    assert simplicial_compare(to_mask([3]), to_mask([1, 2])) < 0
    got = sorted(all_subsets(3), key=functools.cmp_to_key(simplicial_compare))
    assert names(got) == ["", "1", "2", "3", "12", "13", "23", "123"]


def test_comparators_reject_mixed_sizes():
    with pytest.raises(ValueError):
        lex_compare(1, 3)
    with pytest.raises(ValueError):
        colex_compare(1, 3)


@given(layer_pairs())
def test_comparators_match_set_definitions(t):
    n, a, b = t
    assert lex_compare(a, b) == oracle_lex(a, b)
    assert colex_compare(a, b) == oracle_colex(a, b)
    assert simplicial_compare(a, b) == oracle_simplicial(a, b)


@given(st.integers(1, 10), st.data())
def test_simplicial_matches_definition_across_sizes(n, data):
    a = data.draw(st.integers(0, (1 << n) - 1))
    b = data.draw(st.integers(0, (1 << n) - 1))
    assert simplicial_compare(a, b) == oracle_simplicial(a, b)


# -- rank / unrank ------------------------------------------------------------

def test_rank_examples():
    for r in range(1, 6):
        assert colex_rank(to_mask(range(1, r + 1))) == 0
        assert lex_rank(to_mask(range(1, r + 1)), 8) == 0
    assert colex_rank(to_mask([2, 4, 5])) == 8
    assert lex_rank(to_mask([1, 3]), 4) == 1
    assert lex_unrank(4, 2, 1) == to_mask([1, 3])


def test_colex_rank_formula():
    # Σ C(a_j - 1, j) over sorted elements, j from 1
    for a in itertools.combinations(range(1, 9), 3):
        assert colex_rank(to_mask(a)) == sum(comb(x - 1, j) for j, x in enumerate(a, 1))


def test_rank_unrank_round_trips_all_layers():
    for n in range(0, 13):
        for r in range(n + 1):
            L = comb(n, r)
            lex = sorted(layer_masks(n, r), key=functools.cmp_to_key(oracle_lex))
            colex = sorted(layer_masks(n, r), key=functools.cmp_to_key(oracle_colex))
            for m in range(L):
                assert lex_unrank(n, r, m) == lex[m]
                assert colex_unrank(n, r, m) == colex[m]
                assert lex_rank(lex[m], n) == m
                assert colex_rank(colex[m]) == m


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        colex_unrank(5, 2, 10)
    with pytest.raises(ValueError):
        lex_unrank(5, 2, -1)


def test_ranks_beyond_machine_words():
    n, r = 128, 40
    top = comb(n, r)
    assert top > 1 << 64
    a = lex_unrank(n, r, top - 1)
    assert a == to_mask(range(n - r + 1, n + 1))
    assert lex_rank(a, n) == top - 1
    assert colex_rank(colex_unrank(n, r, top // 3)) == top // 3


@given(st.sampled_from(list(OrderKind)), st.integers(1, 10), st.data())
def test_generic_rank_unrank(kind, n, data):
    if kind is OrderKind.SIMPLICIAL:
        m = data.draw(st.integers(0, (1 << n) - 1))
        assert rank(kind, unrank(kind, n, m), n) == m
    else:
        r = data.draw(st.integers(0, n))
        m = data.draw(st.integers(0, comb(n, r) - 1))
        assert rank(kind, unrank(kind, n, m, r), n) == m


# -- initial segments ---------------------------------------------------------

def test_lex_segment_examples():
    assert lex_initial_segment(5, 2, 10).members == layer(5, 2).members
    seg = lex_initial_segment(6, 2, 5)
    assert names(seg.sorted) == ["12", "13", "14", "15", "16"]
    assert all(1 in s for s in seg.sets())
    assert len(lex_initial_segment(5, 3, 0)) == 0
    with pytest.raises(ValueError):
        lex_initial_segment(5, 3, 11)


def test_lex_segment_structure_property():
    # the first C(n,r) - C(n-i,r) sets are those not inside [i+1, n]
    for n in range(1, 10):
        for r in range(1, n + 1):
            for i in range(0, n + 1):
                m = comb(n, r) - comb(n - i, r)
                seg = lex_initial_segment(n, r, m)
                want = {x for x in layer_masks(n, r) if x & ((1 << i) - 1)}
                assert seg.members == want


def test_simplicial_segment_examples():
    assert simplicial_initial_segment(3, 1) == VertexSet(3, frozenset({0}))
    assert simplicial_initial_segment(3, 4) == VertexSet.of(3, ["000", "100", "010", "001"])
    assert simplicial_initial_segment(3, 8) == VertexSet.full(3)
    with pytest.raises(ValueError):
        simplicial_initial_segment(3, 9)


def test_simplicial_segment_matches_comparator_sort():
    for n in range(0, 11):
        order = sorted(all_subsets(n), key=functools.cmp_to_key(oracle_simplicial))
        for l in range((1 << n) + 1):
            assert simplicial_initial_segment(n, l).members == frozenset(order[:l])


def test_rank_order_agrees_with_comparator_sort():
    for n in range(1, 11):
        for r in range(n + 1):
            masks = list(layer_masks(n, r))
            by_cmp = sorted(masks, key=functools.cmp_to_key(lex_compare))
            assert sorted(masks, key=lambda a: lex_rank(a, n)) == by_cmp
            by_cmp = sorted(masks, key=functools.cmp_to_key(colex_compare))
            assert sorted(masks, key=colex_rank) == by_cmp


def test_generic_initial_segment():
    assert initial_segment(OrderKind.LEX, 6, 2, 5) == lex_initial_segment(6, 2, 5)
    with pytest.raises(ValueError):
        initial_segment(OrderKind.SIMPLICIAL, 6, 2, 5)


# -- complements and duality --------------------------------------------------

def test_complement_examples():
    F = lex_initial_segment(5, 2, 5)
    Fc = complement_family(F)
    assert Fc.r == 3 and len(Fc) == 5
    assert complement_family(Fc) == F
    assert complement_family(layer(6, 2)).members == layer(6, 4).members


@given(st.integers(1, 10), st.data())
def test_complement_involution(n, data):
    r = data.draw(st.integers(0, n))
    F = SetFamily._trusted(n, r, frozenset(data.draw(
        st.sets(st.sampled_from(list(layer_masks(n, r)))))))
    assert complement_family(complement_family(F)) == F


def test_lex_colex_reversed_alphabet_duality():
    for n in range(1, 11):
        for r in range(n + 1):
            colex = list(layer_masks(n, n - r))  # colex order in layer n-r
            for m in range(comb(n, r) + 1):
                lhs = complement_family(lex_initial_segment(n, r, m))
                # relabel i -> n+1-i and take the ordinary colex prefix
                relabelled = {reverse_alphabet(x, n) for x in colex[:m]}
                assert lhs.members == relabelled
                assert lhs == colex_reversed_initial_segment(n, n - r, m)
