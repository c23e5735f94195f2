"""Dimension of the amoeba of a linear space.

Two routes: a partition formula in the row matroid of a spanning matrix,
and the rank of the conjugate-pair Jacobian
``D(q1, q2) = (Diag(conj(M) q2) M | Diag(M q1) conj(M))``.
Conjugation is the order-two map ``re + i*im -> re - i*im`` on pairs over
GF(p), with ``i`` a fixed square root of -1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InputError
from .field import DEFAULT_TRIALS, ConjMatrix, ConjScalar, ExactMatrix, hstack, mat_rank, matmul_mod, trial_rngs
from .matroids import LinearRank
from .setfunc import DEFAULT_CAP, SetFunction, dilworth_truncation, full_mask


@dataclass(frozen=True)
class ConjSpaceRep:
    """Column space ``V`` of an ``m x n`` matrix with pair entries."""

    matrix: ConjMatrix

    def __post_init__(self):
        zero = self.matrix.zero_rows()
        if zero:
            raise InputError(f"rows {zero} are zero; the space lies in a coordinate hyperplane", field="space")

    @property
    def conj_matrix(self) -> ConjMatrix:
        return self.matrix.conj()

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def p(self) -> int:
        return self.matrix.p

    def conj(self) -> "ConjSpaceRep":
        return ConjSpaceRep(self.conj_matrix)

    def rank_function(self) -> LinearRank:
        """Rank function of the row matroid of ``M``."""
        return LinearRank(self.matrix.embed())


def amoeba_dim_combinatorial(r: SetFunction, cap: int | None = DEFAULT_CAP) -> int:
    """Minimum of ``sum(2 r(E_i) - 1)`` over partitions of the ground set."""
    loops = r.loops()
    if loops:
        raise InputError(f"rank function has loops {bin(loops)}", field="rank")
    return dilworth_truncation(2 * r - 1, full_mask(r.m), cap)


def conj_jacobian(rep: ConjSpaceRep, q1, q2) -> ExactMatrix:
    """The ``m x 2n`` matrix ``(Diag(conj(M) q2) M | Diag(M q1) conj(M))`` over GF(p)."""
    M = rep.matrix.embed().a
    Mc = rep.conj_matrix.embed().a
    p = rep.p
    vecs = []
    for name, q in (("q1", q1), ("q2", q2)):
        q = _embed_vector(q, p)
        if q.shape != (rep.n,):
            raise DimensionMismatch(f"{name} has length {q.shape[0]}, expected {rep.n}", field=name)
        vecs.append(q.reshape(-1, 1))
    s2 = matmul_mod(Mc, vecs[1], p)
    s1 = matmul_mod(M, vecs[0], p)
    left = (s2 * M) % p
    right = (s1 * Mc) % p
    return hstack([ExactMatrix(left, p), ExactMatrix(right, p)])


def _embed_vector(q, p) -> np.ndarray:
    if isinstance(q, np.ndarray):
        return np.mod(q.astype(np.int64), p)
    out = []
    for x in q:
        out.append(x.value if isinstance(x, ConjScalar) else int(x) % p)
    return np.array(out, dtype=np.int64)


def amoeba_dim_trials(rep: ConjSpaceRep, seed: int = 0, trials: int = DEFAULT_TRIALS) -> list[int]:
    """Rank of ``D(q1, q2)`` at independent random ``q1``, ``q2`` per trial."""
    out = []
    for rng in trial_rngs(seed, trials):
        # a uniform pair vector embeds to a uniform GF(p) vector
        q1 = rng.integers(0, rep.p, size=rep.n, dtype=np.int64)
        q2 = rng.integers(0, rep.p, size=rep.n, dtype=np.int64)
        out.append(mat_rank(conj_jacobian(rep, q1, q2)))
    return out


def amoeba_dim_numeric(rep: ConjSpaceRep, seed: int = 0, trials: int = DEFAULT_TRIALS) -> int:
    return max(amoeba_dim_trials(rep, seed, trials))
