import itertools

import numpy as np
import pytest

from conftest import P, sparse_matrix
from dilworth.counterexamples import permutation_hypergraph
from dilworth.errors import DimensionMismatch, InputError
from dilworth.field import ExactMatrix, hstack, mat_rank, random_matrix
from dilworth.hadamard import (
    HadamardInstance,
    LinearSpaceRep,
    NumericRankFunction,
    PairRank,
    algebraic_matroid_rank_numeric,
    bracketings,
    conjecture_value,
    generic_dimension,
    generic_witness,
    hadamard_jacobian,
    hadamard_point,
    min_nested_upper_bound,
    nested_upper_bound,
    numeric_rank_trials,
    pair_matroid_rank,
    sigma_bracketing,
)
from dilworth.matroids import graphic_representation, partition_matroid_representation
from dilworth.setfunc import SetFunction, full_mask, popcount


def random_instance(rng, d, m=None, max_dim=4):
    m = m or int(rng.integers(1, 8))
    mats = [sparse_matrix(m, int(rng.integers(1, max_dim + 1)), rng) for _ in range(d)]
    return HadamardInstance.of(*mats)


def test_hadamard_point():
    assert hadamard_point([1, 2, 3], [4, 5, 6]) == [4, 10, 18]
    assert hadamard_point([7, 8], [1, 1]) == [7, 8]
    assert hadamard_point([7, 8], [0, 0]) == [0, 0]
    with pytest.raises(DimensionMismatch):
        hadamard_point([1], [1, 2])


def test_jacobian_shapes(rng):
    Y1 = random_matrix(5, 2, rng)
    inst = HadamardInstance.of(Y1)
    J = hadamard_jacobian(inst, [np.array([3, 4])], [0, 2])
    assert J == Y1.row_subset([0, 2])
    Y2 = random_matrix(5, 3, rng)
    inst = HadamardInstance.of(Y1, Y2)
    p1, p2 = np.array([1, 2]), np.array([3, 1, 4])
    x1 = (Y1.a @ p1) % P
    x2 = (Y2.a @ p2) % P
    expected = hstack([ExactMatrix((x2[:, None] * Y1.a) % P), ExactMatrix((x1[:, None] * Y2.a) % P)])
    assert hadamard_jacobian(inst, [p1, p2]) == expected
    Y3 = random_matrix(5, 1, rng)
    J = hadamard_jacobian(HadamardInstance.of(Y1, Y2, Y3), [p1, np.zeros(3, dtype=np.int64), np.array([2])])
    # x2 = 0 kills every block except the second
    assert not J.a[:, :2].any() and not J.a[:, 5:].any()
    with pytest.raises(DimensionMismatch):
        hadamard_jacobian(inst, [p1])


def test_linear_space_rep_loops():
    rep = LinearSpaceRep(ExactMatrix([[1, 0], [0, 0], [2, 3]]))
    assert rep.loop_set == {1}
    rep = LinearSpaceRep.from_spanning(ExactMatrix([[1, 2], [2, 4], [3, 6]]))
    assert rep.dim == 1


def test_numeric_examples(k4):
    G = graphic_representation(k4).rep
    inst = HadamardInstance.of(G, G)
    assert algebraic_matroid_rank_numeric(inst) == 5
    H = permutation_hypergraph()
    inst = HadamardInstance.of(*(partition_matroid_representation(H, i).rep for i in range(3)))
    assert algebraic_matroid_rank_numeric(inst) == 5
    Y = sparse_matrix(6, 3, np.random.default_rng(4))
    one = HadamardInstance.of(Y)
    for F in range(1 << 6):
        assert algebraic_matroid_rank_numeric(one, F) == mat_rank(Y.row_subset([e for e in range(6) if F >> e & 1]))


def test_numeric_trials_deterministic(rng):
    inst = random_instance(rng, 2, m=6)
    assert numeric_rank_trials(inst, seed=11) == numeric_rank_trials(inst, seed=11)


def test_pair_rank_examples(k4):
    r = graphic_representation(k4).rank_function()
    assert pair_matroid_rank(r, r, full_mask(6)) == 5
    assert pair_matroid_rank(r, r, 0) == 0


def test_pair_rank_with_full_second_factor(rng):
    for _ in range(10):
        m = int(rng.integers(1, 7))
        Y1 = sparse_matrix(m, int(rng.integers(1, 4)), rng)
        Y2 = random_matrix(m, m, rng)  # generic space of dimension m
        inst = HadamardInstance.of(Y1, Y2)
        r1, r2 = inst.rank_functions()
        numeric = NumericRankFunction(inst, seed=3)
        for F in range(1 << m):
            assert pair_matroid_rank(r1, r2, F) == numeric(F) == popcount(F)


def test_pair_rank_loops():
    # a zero row in one factor is a loop of the product
    Y1 = ExactMatrix([[1, 0], [0, 0], [1, 1]])
    Y2 = ExactMatrix([[1], [1], [1]])
    inst = HadamardInstance.of(Y1, Y2)
    r1, r2 = inst.rank_functions()
    for F in range(8):
        assert pair_matroid_rank(r1, r2, F) == PairRank(r1, r2)(F) == algebraic_matroid_rank_numeric(inst, F)
    assert inst.loops() == 0b010


def test_projection_commutes(rng):
    for _ in range(10):
        inst = random_instance(rng, 2, m=6)
        F = int(rng.integers(1, 1 << 6))
        sub = inst.restrict(F)
        assert algebraic_matroid_rank_numeric(inst, F) == algebraic_matroid_rank_numeric(sub)


def test_bracketings():
    assert bracketings([0]) == [0]
    assert bracketings([0, 1]) == [(0, 1)]
    assert len(bracketings(range(3))) == 3
    assert len(bracketings(range(4))) == 15
    assert sigma_bracketing((2, 0, 1)) == ((2, 0), 1)


def test_nested_bound_two_factors_is_exact(rng):
    for _ in range(10):
        inst = random_instance(rng, 2)
        r1, r2 = inst.rank_functions()
        E = full_mask(inst.m)
        assert nested_upper_bound(inst, E, (0, 1)) == pair_matroid_rank(r1, r2, E)
        assert conjecture_value([r1, r2], E) == pair_matroid_rank(r1, r2, E)


def test_nested_bound_routes_agree(rng):
    for _ in range(10):
        inst = random_instance(rng, 3, m=int(rng.integers(2, 7)))
        for g in bracketings(range(3)):
            assert nested_upper_bound(inst, None, g, method="combinatorial") == nested_upper_bound(
                inst, None, g, method="linear", seed=5
            )


def test_nested_bound_never_exceeded(rng):
    for d in (3, 4):
        for _ in range(8):
            inst = random_instance(rng, d, m=int(rng.integers(2, 7)), max_dim=3)
            numeric = NumericRankFunction(inst, seed=1)
            best, _ = min_nested_upper_bound(inst)
            assert numeric(full_mask(inst.m)) <= best
            for g in bracketings(range(d)):
                f = nested_upper_bound(inst, None, g)
                assert numeric(full_mask(inst.m)) <= f


def test_permutation_instance_bounds():
    H = permutation_hypergraph()
    inst = HadamardInstance.of(*(partition_matroid_representation(H, i).rep for i in range(3)))
    for sigma in itertools.permutations(range(3)):
        assert nested_upper_bound(inst, None, sigma_bracketing(sigma)) == 6
    assert conjecture_value(inst.rank_functions()) == 6
    # the (r1 + r2 - 1)^MD restriction is the rank function of a 6-cycle's graphic matroid
    r1, r2, _ = inst.rank_functions()
    pr = PairRank(r1, r2)
    for F in range(1, 64):
        assert pr(F) == (popcount(F) if F != 63 else 5)


def test_conjecture_value_fast_path_agrees(rng):
    from conftest import random_graph
    from dilworth.matroids import count_matroid_rank

    for _ in range(10):
        G = random_graph(rng, max_vertices=6, max_edges=8, multi=True)
        for pattern in [(1, 1, 0), (1, 1, 1), (1, 0, 0), (1, 1), (0, 0)]:
            ranks = [count_matroid_rank(G, 1, l) for l in pattern]
            for F in range(0, 1 << G.edge_count, 3):
                assert conjecture_value(ranks, F) == conjecture_value(ranks, F, fast=False)


def test_generic_dimension():
    assert generic_dimension([1, 1, 1], 5) == 1
    assert generic_dimension([5, 3], 5) == 5
    assert generic_dimension([2, 2], 4) == 3
    with pytest.raises(InputError):
        generic_dimension([0, 2], 4)


@pytest.mark.parametrize("dims,m,rank", [((1, 1, 1), 4, 1), ((2, 2), 4, 3), ((3, 3, 3), 5, 5)])
def test_generic_witness_examples(dims, m, rank):
    Ys = generic_witness(dims, m)
    assert mat_rank(hstack(Ys)) == rank
    for Y, n in zip(Ys, dims):
        assert Y.shape == (m, n) and mat_rank(Y) == n
        assert np.all(Y.a.sum(axis=1) == 1)


def test_generic_witness_all_ones_base():
    Ys = generic_witness([1, 1], 3)
    assert all(Y.tolist() == [[1], [1], [1]] for Y in Ys)


def test_generic_witness_is_a_valid_space_for_the_product(rng):
    # the witness spaces reach the generic rank as a Hadamard product too
    for dims, m in [((2, 2), 4), ((2, 3), 5), ((2, 2, 2), 6)]:
        inst = HadamardInstance.of(*generic_witness(dims, m))
        assert algebraic_matroid_rank_numeric(inst) == generic_dimension(dims, m)


def test_instance_validation():
    with pytest.raises(DimensionMismatch):
        HadamardInstance.of(ExactMatrix([[1]]), ExactMatrix([[1], [1]]))
    with pytest.raises(InputError):
        HadamardInstance(())
    inst = HadamardInstance.of(ExactMatrix([[1], [1]]), ExactMatrix([[1], [2]]))
    with pytest.raises(InputError):
        nested_upper_bound(inst, None, (0, 0))
    with pytest.raises(InputError):
        nested_upper_bound(inst, None, (0, 1), method="nope")
    with pytest.raises(InputError):
        conjecture_value([])


def test_setfunction_pair_requires_same_ground():
    with pytest.raises(DimensionMismatch):
        PairRank(SetFunction(2, lambda F: 0), SetFunction(3, lambda F: 0))
