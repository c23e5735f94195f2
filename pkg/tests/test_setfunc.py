import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph, sparse_matrix
from dilworth.counterexamples import ring_gadget_edges, gadget_ring_graph
from dilworth.errors import CapExceeded, InputError
from dilworth.matroids import CountFunction, LinearRank, graphic_representation
from dilworth.setfunc import (
    SetFunction,
    TableFunction,
    bell_number,
    check_submodular,
    dilworth_matroid_rank,
    dilworth_matroid_witness,
    dilworth_partition,
    dilworth_truncation,
    enumerate_partitions,
    from_callable,
    full_mask,
    induced_independent,
    induced_rank,
    is_matroid_rank,
    max_independent_size,
    popcount,
)


def bell_binomial(n):
    from math import comb

    B = [1]
    for k in range(n):
        B.append(sum(comb(k, j) * B[j] for j in range(k + 1)))
    return B[n]


def cardinality(m):
    return SetFunction(m, popcount, monotone=True, submodular=True)


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (3, 5), (6, 203)])
def test_partition_counts(n, count):
    parts = list(enumerate_partitions(range(n)))
    assert len(parts) == count == bell_binomial(n) == bell_number(n)
    # each partition covers the set with disjoint nonempty blocks, and none repeats
    seen = set()
    for part in parts:
        assert all(B for B in part)
        assert sum(part) == full_mask(n)
        assert all(a & b == 0 for a, b in itertools.combinations(part, 2))
        seen.add(frozenset(part))
    assert len(seen) == count


def test_partition_cap():
    with pytest.raises(CapExceeded) as exc:
        list(enumerate_partitions(range(13)))
    assert exc.value.cap == 12
    assert len(list(enumerate_partitions(range(7), cap=7))) == bell_binomial(7)


def test_truncation_examples(triangle):
    c11 = CountFunction(triangle, 1, 1)
    assert dilworth_truncation(c11, 0b111) == 2
    assert dilworth_truncation(c11, 0) == 0
    r = LinearRank(sparse_matrix(5, 3, np.random.default_rng(1)))
    for F in range(1, 32):
        # submodular with f(empty) = 0: the trivial partition is optimal
        assert dilworth_truncation(r, F) == r(F)


def test_induced_rank_examples(k4):
    assert induced_rank(cardinality(4), 0b1111) == 4
    assert induced_rank(SetFunction(4, lambda F: 0), 0b1111) == 0
    graphic = CountFunction(k4, 1, 1).matroid_rank()
    assert induced_rank(graphic, full_mask(6)) == 3


def test_matroid_rank_examples(k4):
    r = LinearRank(graphic_representation(k4).rep)
    f = 2 * r - 1
    assert dilworth_matroid_rank(f, full_mask(6)) == 5
    assert dilworth_matroid_rank(f, full_mask(6), method="enumerate") == 5
    assert dilworth_matroid_rank(f, 0) == 0
    G = gadget_ring_graph()
    c34 = CountFunction(G, 3, 4)
    gadget = ring_gadget_edges(0)
    assert popcount(gadget) == 14
    # 14 elements is beyond the exhaustive cap; the count function answers by the pebble game
    assert dilworth_matroid_rank(c34, gadget) == 14
    with pytest.raises(CapExceeded):
        dilworth_matroid_rank(c34, gadget, fast=False)


def test_independence_examples(k4):
    c23 = CountFunction(k4, 2, 3)
    assert induced_independent(c23, 0)
    assert not induced_independent(c23, full_mask(6))
    assert not induced_independent(c23, full_mask(6), fast=False)
    c34 = CountFunction(gadget_ring_graph(), 3, 4)
    assert induced_independent(c34, full_mask(56))


def test_witness_attains_value(rng):
    for _ in range(20):
        r = LinearRank(sparse_matrix(6, 3, rng))
        f = 2 * r - 1
        value, F0, blocks = dilworth_matroid_witness(f, full_mask(6))
        assert F0 & sum(blocks) == 0 and F0 | sum(blocks) == full_mask(6)
        assert popcount(F0) + sum(f(B) for B in blocks) == value
        v2, part = dilworth_partition(f, full_mask(6))
        assert sum(f(B) for B in part) == v2 >= value


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.integers(1, 4), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_dp_and_enumeration_agree(m, n, shift, seed):
    rng = np.random.default_rng(seed)
    r = LinearRank(sparse_matrix(m, n, rng))
    f = 2 * r - shift if shift else r
    for F in range(1, 1 << m):
        assert dilworth_truncation(f, F) == dilworth_truncation(f, F, method="enumerate")
        assert dilworth_matroid_rank(f, F, fast=False) == dilworth_matroid_rank(f, F, method="enumerate")


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_matroid_rank_bounds_and_greedy(m, n, seed):
    rng = np.random.default_rng(seed)
    r = LinearRank(sparse_matrix(m, n, rng))
    f = r + r - 1
    md = f.matroid_rank()
    for F in range(1, 1 << m):
        v = md(F)
        assert v <= min(popcount(F), f(F))
        assert v == max_independent_size(f, F)
    assert is_matroid_rank(md)


def test_truncated_terms_give_weaker_matroid(rng):
    # independent for sum of f_i^MD - l implies independent for sum of f_i - l
    for _ in range(15):
        m = int(rng.integers(2, 7))
        fs = [LinearRank(sparse_matrix(m, int(rng.integers(1, 4)), rng)) for _ in range(int(rng.integers(1, 4)))]
        l = int(rng.integers(0, len(fs) + 1))
        lhs = sum((f.matroid_rank() for f in fs[1:]), fs[0].matroid_rank()) - l
        rhs = sum(fs[1:], fs[0]) - l
        for I in range(1, 1 << m):
            if induced_independent(lhs, I, fast=False):
                assert induced_independent(rhs, I, fast=False)


def test_table_and_callable():
    f = TableFunction(2, {0: 0, 1: 1, 2: 1, 3: 1})
    assert dilworth_truncation(f, 3) == 1
    g = from_callable(3, len)
    assert g([0, 2]) == 2
    with pytest.raises(InputError):
        f(0b100)


def test_submodular_spot_check():
    assert check_submodular(cardinality(5))
    with pytest.raises(InputError):
        SetFunction(4, lambda F: popcount(F) ** 2, submodular=True)


def test_arithmetic_shift_applies_to_empty_set():
    r = cardinality(3)
    assert (r - 1)(0) == -1
    assert (2 * r + r)(0b11) == 6
    assert (-r)(0b1) == -1


def test_count_function_memo_and_ground(k4):
    c = CountFunction(k4, 2, 3)
    assert c(0b1) == 1 and c(0) == 0
    assert c([0, 1, 3]) == c(0b1011)
    with pytest.raises(InputError):
        c(1 << 6)


def test_dilworth_random_graphs_match_pebble(rng):
    # count matroid ranks by exhaustive search against the pebble game
    for _ in range(10):
        G = random_graph(rng, max_vertices=6, max_edges=8, multi=True)
        for k, l in [(1, 0), (1, 1), (2, 3), (3, 4)]:
            c = CountFunction(G, k, l)
            for F in range(1 << G.edge_count):
                assert dilworth_matroid_rank(c, F, fast=False) == dilworth_matroid_rank(c, F)
