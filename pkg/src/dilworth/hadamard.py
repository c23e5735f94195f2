"""Hadamard products of linear spaces and their algebraic matroids.

A linear space ``L_i`` in ``F^m`` is given by an ``m x n_i`` matrix ``Y_i``
whose columns span it.  At a point ``x_i = Y_i p_i`` the tangent space of
``L_1 * ... * L_d`` is spanned by the columns of the blocks
``(prod_{j != i} Diag(x_j)) Y_i``; the row matroid of that Jacobian at a
generic point is the algebraic matroid of the product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InputError
from .field import (
    DEFAULT_PRIME,
    DEFAULT_TRIALS,
    ExactMatrix,
    column_basis,
    mat_rank,
    random_vector,
    trial_rngs,
)
from .matroids import CountFunction, LinearRank, pebble_game_rank
from .setfunc import (
    DEFAULT_CAP,
    MatroidRankFunction,
    SetFunction,
    ShiftedSum,
    bits,
    dilworth_matroid_rank,
    full_mask,
    popcount,
    to_mask,
)


@dataclass(frozen=True)
class LinearSpaceRep:
    """Column space of ``matrix``; zero rows are the loops of its matroid."""

    matrix: ExactMatrix
    loop_set: frozenset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "loop_set", frozenset(self.matrix.zero_rows()))

    @classmethod
    def from_spanning(cls, M: ExactMatrix) -> "LinearSpaceRep":
        """Keep an independent set of columns so that ``n_i = dim L_i``."""
        return cls(column_basis(M))

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def dim(self) -> int:
        return self.matrix.cols

    def rank_function(self) -> LinearRank:
        return LinearRank(self.matrix)

    def restrict(self, F) -> "LinearSpaceRep":
        return LinearSpaceRep(self.matrix.row_subset(bits(to_mask(F))))


@dataclass(frozen=True)
class HadamardInstance:
    factors: tuple[LinearSpaceRep, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise InputError("need at least one factor", field="spaces")
        ms = {f.m for f in factors}
        if len(ms) != 1:
            raise DimensionMismatch(f"factors live in different ambient spaces: {sorted(ms)}", field="spaces")
        ps = {f.matrix.p for f in factors}
        if len(ps) != 1:
            raise DimensionMismatch("factors use different primes", field="spaces")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, *matrices: ExactMatrix) -> "HadamardInstance":
        return cls(tuple(LinearSpaceRep.from_spanning(M) for M in matrices))

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def m(self) -> int:
        return self.factors[0].m

    @property
    def p(self) -> int:
        return self.factors[0].matrix.p

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    def loops(self) -> int:
        return to_mask(set().union(*(f.loop_set for f in self.factors)))

    def restrict(self, F) -> "HadamardInstance":
        return HadamardInstance(tuple(f.restrict(F) for f in self.factors))

    def rank_functions(self) -> list[LinearRank]:
        return [f.rank_function() for f in self.factors]


def hadamard_point(*vectors, p: int = DEFAULT_PRIME) -> list[int]:
    """Coordinatewise product of equal-length vectors mod ``p``."""
    if not vectors:
        raise InputError("need at least one vector")
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise DimensionMismatch(f"vector lengths differ: {sorted(lengths)}")
    out = [1] * lengths.pop()
    for v in vectors:
        out = [a * int(b) % p for a, b in zip(out, v)]
    return out


def _jacobian_array(mats: Sequence[np.ndarray], points: Sequence[np.ndarray], p: int) -> np.ndarray:
    xs = []
    for Y, q in zip(mats, points):
        if Y.shape[1] != len(q):
            raise DimensionMismatch(f"point of length {len(q)} for a space of dimension {Y.shape[1]}")
        x = np.zeros(Y.shape[0], dtype=np.int64)
        for j in range(Y.shape[1]):
            x = (x + Y[:, j] * int(q[j]) % p) % p
        xs.append(x)
    blocks = []
    for i, Y in enumerate(mats):
        scale = np.ones(Y.shape[0], dtype=np.int64)
        for j, x in enumerate(xs):
            if j != i:
                scale = scale * x % p
        blocks.append(Y * scale[:, None] % p)
    return np.hstack(blocks)


def hadamard_jacobian(inst: HadamardInstance, points, F=None) -> ExactMatrix:
    """``|F| x sum(n_i)`` matrix whose block ``i`` is ``(prod_{j!=i} Diag(Y_j p_j)) Y_i``."""
    if len(points) != inst.d:
        raise DimensionMismatch(f"{len(points)} points for {inst.d} factors", field="points")
    J = _jacobian_array([f.matrix.a for f in inst.factors], points, inst.p)
    rows = range(inst.m) if F is None else bits(to_mask(F))
    return ExactMatrix(J[list(rows)], inst.p)


def _random_points(inst: HadamardInstance, rng) -> list[np.ndarray]:
    return [random_vector(n, rng, inst.p) for n in inst.dims]


def numeric_rank_trials(inst: HadamardInstance, F=None, seed: int = 0, trials: int = DEFAULT_TRIALS) -> list[int]:
    """Jacobian rank of the rows ``F`` at ``trials`` independently seeded points."""
    F = full_mask(inst.m) if F is None else to_mask(F)
    return [mat_rank(hadamard_jacobian(inst, _random_points(inst, rng), F)) for rng in trial_rngs(seed, trials)]


def algebraic_matroid_rank_numeric(inst: HadamardInstance, F=None, seed: int = 0, trials: int = DEFAULT_TRIALS) -> int:
    """Rank of ``F`` in ``M(L_1 * ... * L_d)``, as the best of ``trials`` random Jacobians."""
    return max(numeric_rank_trials(inst, F, seed, trials))


class NumericRankFunction(SetFunction):
    """Row-subset ranks of a few fixed random Jacobians, maximised over trials.

    Evaluation stops early once a trial reaches ``min(|F|, columns)``.
    """

    def __init__(self, inst: HadamardInstance, seed: int = 0, trials: int = DEFAULT_TRIALS):
        self.inst = inst
        self.jacobians = [
            hadamard_jacobian(inst, _random_points(inst, rng)) for rng in trial_rngs(seed, trials)
        ]
        super().__init__(inst.m, name="numeric")

    def _eval(self, mask):
        if mask == 0:
            return 0
        rows = bits(mask)
        cap = min(len(rows), self.jacobians[0].cols)
        best = 0
        for J in self.jacobians:
            best = max(best, mat_rank(J.row_subset(rows)))
            if best == cap:
                break
        return best

    def fast_matroid_rank(self, mask):
        return self(mask)


# --------------------------------------------------------------------------
# two factors: the induced matroid of r1 + r2 - 1


class PairRank(SetFunction):
    """``(r_a + r_b - 1)^MD`` with loops of either factor deleted first."""

    def __init__(self, ra: SetFunction, rb: SetFunction, cap: int | None = DEFAULT_CAP):
        if ra.m != rb.m:
            raise DimensionMismatch(f"ground sets differ: {ra.m} vs {rb.m}")
        self.ra, self.rb = ra, rb
        self.loopmask = ra.loops() | rb.loops()
        self.md = MatroidRankFunction(ShiftedSum([(1, ra), (1, rb)], -1), cap=cap)
        super().__init__(ra.m, name=f"({ra.name}+{rb.name}-1)^MD")

    def _eval(self, mask):
        return self.md(mask & ~self.loopmask)

    def fast_matroid_rank(self, mask):
        return self(mask)


def pair_matroid_rank(r1: SetFunction, r2: SetFunction, F, cap: int | None = DEFAULT_CAP) -> int:
    """Rank of ``F`` in the matroid induced by ``r1 + r2 - 1`` (loops stay loops)."""
    loops = r1.loops() | r2.loops()
    f = ShiftedSum([(1, r1), (1, r2)], -1)
    return dilworth_matroid_rank(f, to_mask(F) & ~loops, cap=cap)


# --------------------------------------------------------------------------
# more factors: nested bounds and the conjectured value


def bracketings(leaves) -> list:
    """Every binary bracketing of ``leaves`` up to swapping the two halves."""
    leaves = tuple(leaves)
    if len(leaves) == 1:
        return [leaves[0]]
    first, rest = leaves[0], leaves[1:]
    out = []
    for mask in range(1 << len(rest)):
        left = (first,) + tuple(x for i, x in enumerate(rest) if mask >> i & 1)
        right = tuple(x for i, x in enumerate(rest) if not mask >> i & 1)
        if not right:
            continue
        for a in bracketings(left):
            for b in bracketings(right):
                out.append((a, b))
    return out


def sigma_bracketing(sigma: Sequence[int]):
    """``((s1, s2), s3)`` for a permutation of three factors."""
    a, b, c = sigma
    return ((a, b), c)


def _leaves(grouping) -> list[int]:
    if isinstance(grouping, (int, np.integer)):
        return [int(grouping)]
    if not isinstance(grouping, (tuple, list)) or len(grouping) != 2:
        raise InputError(f"bracketing nodes must be pairs, got {grouping!r}", field="grouping")
    return _leaves(grouping[0]) + _leaves(grouping[1])


def _check_grouping(grouping, d: int):
    leaves = _leaves(grouping)
    if sorted(leaves) != list(range(d)):
        raise InputError(f"bracketing {grouping!r} must use each of 0..{d - 1} once", field="grouping")


def nested_rank_function(inst: HadamardInstance, grouping, cap: int | None = DEFAULT_CAP) -> SetFunction:
    """Combinatorial oracle: leaves are factor ranks, each pair becomes ``(r_a + r_b - 1)^MD``."""
    _check_grouping(grouping, inst.d)
    ranks = inst.rank_functions()

    def build(node):
        if isinstance(node, (int, np.integer)):
            return ranks[int(node)]
        return PairRank(build(node[0]), build(node[1]), cap=cap)

    return build(grouping)


def _nested_representation(inst: HadamardInstance, grouping, rng) -> np.ndarray:
    def build(node):
        if isinstance(node, (int, np.integer)):
            return inst.factors[int(node)].matrix.a
        A, B = build(node[0]), build(node[1])
        pts = [random_vector(A.shape[1], rng, inst.p), random_vector(B.shape[1], rng, inst.p)]
        return _jacobian_array([A, B], pts, inst.p)

    return build(grouping)


def nested_upper_bound(
    inst: HadamardInstance,
    F=None,
    grouping=None,
    method: str = "auto",
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    cap: int | None = DEFAULT_CAP,
) -> int:
    """Upper bound on the rank of ``F`` in ``M(L_1 * ... * L_d)`` from one bracketing.

    ``"combinatorial"`` evaluates the nested Dilworth formula exactly;
    ``"linear"`` realises every inner node as the Jacobian of a two-factor
    product, whose generic row matroid is the same nested matroid, and is the
    only route for ground sets beyond the enumeration cap.  ``"auto"`` picks
    the first when ``|F| <= cap``.
    """
    mask = full_mask(inst.m) if F is None else to_mask(F)
    if grouping is None:
        grouping = _left_comb(inst.d)
    _check_grouping(grouping, inst.d)
    if method == "auto":
        method = "combinatorial" if cap is None or popcount(mask) <= cap else "linear"
    if method == "combinatorial":
        return nested_rank_function(inst, grouping, cap)(mask)
    if method == "linear":
        rows = bits(mask)
        best = 0
        for rng in trial_rngs(seed, trials):
            J = _nested_representation(inst, grouping, rng)
            best = max(best, mat_rank(ExactMatrix(J[rows], inst.p)))
        return best
    raise InputError(f"unknown method {method!r}", field="method")


def _left_comb(d: int):
    node = 0
    for i in range(1, d):
        node = (node, i)
    return node


def min_nested_upper_bound(inst: HadamardInstance, F=None, **kw) -> tuple[int, object]:
    """Smallest bound over every bracketing, with a bracketing attaining it."""
    best = None
    for g in bracketings(range(inst.d)):
        v = nested_upper_bound(inst, F, g, **kw)
        if best is None or v < best[0]:
            best = (v, g)
    return best


def _count_signature(r: SetFunction):
    """``(graph, l)`` when ``r`` is the rank of a (1, l)-count matroid, else None."""
    if isinstance(r, MatroidRankFunction) and isinstance(r.f, CountFunction) and r.f.k == 1:
        return r.f.graph, r.f.l
    return None


def conjecture_value(ranks: Sequence[SetFunction], F=None, cap: int | None = DEFAULT_CAP, fast: bool = True) -> int:
    """Rank of ``F`` in the matroid induced by ``r_1 + ... + r_d - (d-1)``.

    When every ``r_i`` is a graphic or bicircular count-matroid rank on one
    graph, the induced matroid is the ``(a+b, a+d-1)``-count matroid
    (``a`` graphic and ``b`` bicircular terms) and the pebble game answers.
    """
    ranks = list(ranks)
    if not ranks:
        raise InputError("need at least one rank function", field="ranks")
    m = ranks[0].m
    mask = full_mask(m) if F is None else to_mask(F)
    d = len(ranks)
    if fast:
        sigs = [_count_signature(r) for r in ranks]
        if all(sigs) and all(s[0] == sigs[0][0] for s in sigs):
            graph = sigs[0][0]
            a = sum(1 for s in sigs if s[1] == 1)
            b = d - a
            if a + 2 * b > d - 1:
                return pebble_game_rank(CountFunction(graph, a + b, a + d - 1), mask)
    loops = 0
    for r in ranks:
        loops |= r.loops()
    f = ShiftedSum([(1, r) for r in ranks], -(d - 1), m)
    return dilworth_matroid_rank(f, mask & ~loops, cap=cap)


# --------------------------------------------------------------------------
# generic spaces


def generic_dimension(dims: Sequence[int], m: int) -> int:
    """``min(m, n_1 + ... + n_d - (d - 1))``."""
    _check_dims(dims, m)
    return min(m, sum(dims) - (len(dims) - 1))


def _check_dims(dims, m):
    if not dims:
        raise InputError("need at least one dimension", field="dims")
    for n in dims:
        if not 1 <= n <= m:
            raise InputError(f"dimension {n} outside 1..{m}", field="dims")


def _first_circuit(rows: list[list[int]]):
    """Signed coefficients of the first row dependency, scanning rows in order.

    Returns ``alpha`` with ``sum alpha[r] * rows[r] = 0`` whose support is the
    fundamental circuit of the first dependent row, or None when the rows are
    independent.
    """
    basis = []  # (pivot column, reduced row, combination of original rows)
    for t, row in enumerate(rows):
        vec = [Fraction(x) for x in row]
        combo = {t: Fraction(1)}
        for piv, brow, bcombo in basis:
            if vec[piv]:
                c = vec[piv] / brow[piv]
                vec = [a - c * b for a, b in zip(vec, brow)]
                for k, v in bcombo.items():
                    combo[k] = combo.get(k, Fraction(0)) - c * v
        nz = next((j for j, x in enumerate(vec) if x), None)
        if nz is None:
            alpha = [Fraction(0)] * len(rows)
            for k, v in combo.items():
                alpha[k] = v
            # scale so the dependent row carries -1
            s = -alpha[t]
            return [a / s for a in alpha]
        basis.append((nz, vec, combo))
    return None


def generic_witness(dims: Sequence[int], m: int, p: int = DEFAULT_PRIME) -> list[ExactMatrix]:
    """0/1 matrices ``Y_i`` (``m x n_i``, rank ``n_i``, one 1 per row) whose
    concatenation has rank ``min(m, sum n_i - (d-1))``.

    Built by adding one column at a time from all-ones columns.  If the
    concatenation already has rank ``m``, a column with two or more ones gives
    up one of them to the new column.  Otherwise the first row circuit
    ``alpha`` is found; the column ``c`` holding the 1 of the smallest row in
    ``alpha > 0`` hands every such row of ``alpha > 0`` to the new column.
    """
    dims = [int(n) for n in dims]
    _check_dims(dims, m)
    d = len(dims)
    col_of = [[0] * m for _ in range(d)]
    ncols = [1] * d

    def concat_rows():
        rows = []
        for r in range(m):
            row = []
            for i in range(d):
                block = [0] * ncols[i]
                block[col_of[i][r]] = 1
                row.extend(block)
            rows.append(row)
        return rows

    for i in range(d):
        while ncols[i] < dims[i]:
            new = ncols[i]
            alpha = _first_circuit(concat_rows())
            if alpha is None:
                counts = np.bincount(col_of[i], minlength=ncols[i])
                j = int(np.flatnonzero(counts >= 2)[0])
                s = col_of[i].index(j)
                col_of[i][s] = new
            else:
                plus = [r for r in range(m) if alpha[r] > 0]
                minus = [r for r in range(m) if alpha[r] < 0]
                a = plus[0]
                c = col_of[i][a]
                if not any(col_of[i][b] == c for b in minus):
                    raise AssertionError("circuit has no compatible negative row")
                for r in plus:
                    if col_of[i][r] == c:
                        col_of[i][r] = new
            ncols[i] += 1

    mats = []
    for i in range(d):
        a = np.zeros((m, ncols[i]), dtype=np.int64)
        a[np.arange(m), col_of[i]] = 1
        mats.append(ExactMatrix(a, p))
    return mats
