"""Generic linear sections of subspace families.

Cutting every member of a family ``{A_e}`` with one generic codimension-``k``
subspace ``H`` produces a family whose span dimensions are the Dilworth
truncation of ``F -> dim<A_e : e in F> - k``.  This module samples such
sections and compares both sides subset by subset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DimensionMismatch, InputError, TransversalityError
from .field import (
    DEFAULT_PRIME,
    ExactMatrix,
    Subspace,
    as_rng,
    hstack,
    mat_rank,
    matmul_mod,
    nullspace,
    random_matrix,
)
from .setfunc import DEFAULT_CAP, SetFunction, bits, dilworth_partition, full_mask, submasks, to_mask

SECTION_RETRIES = 3


@dataclass(frozen=True)
class SubspaceFamily:
    """Subspaces ``A_0, ..., A_{m-1}`` of a common ``GF(p)^n``."""

    ambient_dim: int
    members: tuple[Subspace, ...]

    def __post_init__(self):
        members = tuple(self.members)
        for e, A in enumerate(members):
            if A.ambient_dim != self.ambient_dim:
                raise DimensionMismatch(
                    f"member {e} lives in dimension {A.ambient_dim}, not {self.ambient_dim}", field="members"
                )
        if len({A.p for A in members}) > 1:
            raise InputError("members use different primes", field="members")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_matrices(cls, ambient_dim: int, matrices, p: int = DEFAULT_PRIME) -> "SubspaceFamily":
        """Family of column spans; a member spanned by zero columns is rejected."""
        members = []
        for e, M in enumerate(matrices):
            M = M if isinstance(M, ExactMatrix) else ExactMatrix(M, p)
            if M.rows != ambient_dim:
                raise DimensionMismatch(f"member {e} has {M.rows} rows, expected {ambient_dim}", field="members")
            A = Subspace.span(M)
            if A.dim == 0:
                raise InputError(f"member {e} is the zero subspace", field="members")
            members.append(A)
        return cls(ambient_dim, tuple(members))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def p(self) -> int:
        return self.members[0].p if self.members else DEFAULT_PRIME

    @property
    def dims(self) -> list[int]:
        return [A.dim for A in self.members]

    def span_dim(self, F=None) -> int:
        """``dim <A_e : e in F>``."""
        mask = full_mask(self.size) if F is None else to_mask(F)
        mats = [self.members[e].basis for e in bits(mask) if self.members[e].dim]
        return mat_rank(hstack(mats)) if mats else 0

    def span_function(self) -> "SpanDimension":
        return SpanDimension(self)


class SpanDimension(SetFunction):
    """The polymatroid ``F -> dim <A_e : e in F>``."""

    def __init__(self, fam: SubspaceFamily):
        self.fam = fam
        super().__init__(fam.size, name="span_dim")
        self.monotone = self.submodular = True

    def _eval(self, mask):
        return self.fam.span_dim(mask)


def random_codim_subspace(n: int, k: int, rng, p: int = DEFAULT_PRIME) -> ExactMatrix:
    """A ``k x n`` matrix of full row rank; its kernel is a random codimension-``k`` subspace."""
    if not 0 <= k <= n:
        raise InputError(f"codimension {k} outside 0..{n}", field="codim")
    rng = as_rng(rng)
    while True:
        N = random_matrix(k, n, rng, p)
        if mat_rank(N) == k:
            return N


def cut(A: Subspace, N: ExactMatrix) -> Subspace:
    """``A`` intersected with ``ker N``, computed as ``A * ker(N A)``."""
    p = A.p
    if A.dim == 0:
        return A
    NA = matmul_mod(N.a, A.basis.a, p)
    kernel = nullspace(NA, p)
    if not kernel:
        return Subspace.zero(A.ambient_dim, p)
    coeffs = np.stack(kernel, axis=1)
    return Subspace(ExactMatrix(matmul_mod(A.basis.a, coeffs, p), p))


def sample_section(fam: SubspaceFamily, k: int, rng, retries: int = SECTION_RETRIES):
    """``(section family, N)`` with every member cut transversally by ``ker N``."""
    rng = as_rng(rng)
    for e, A in enumerate(fam.members):
        if A.dim < k:
            raise InputError(f"member {e} has dimension {A.dim} < codimension {k}", field="codim")
    bad = None
    for _ in range(retries):
        N = random_codim_subspace(fam.ambient_dim, k, rng, fam.p)
        cuts = [cut(A, N) for A in fam.members]
        bad = next(((e, A.dim - k, B.dim) for e, (A, B) in enumerate(zip(fam.members, cuts)) if B.dim != A.dim - k), None)
        if bad is None:
            return SubspaceFamily(fam.ambient_dim, tuple(cuts)), N
    raise TransversalityError(*bad)


def random_section(fam: SubspaceFamily, k: int, rng, retries: int = SECTION_RETRIES) -> SubspaceFamily:
    """``{A_e ∩ H}`` for a random codimension-``k`` subspace ``H``."""
    return sample_section(fam, k, rng, retries)[0]


def iterated_section(fam: SubspaceFamily, k: int, rng, retries: int = SECTION_RETRIES) -> SubspaceFamily:
    """``k`` successive random hyperplane sections."""
    rng = as_rng(rng)
    for _ in range(k):
        fam = random_section(fam, 1, rng, retries)
    return fam


def _compare(fam: SubspaceFamily, section: SubspaceFamily, k: int, cap) -> list[dict]:
    g = SpanDimension(fam) - k
    rows = []
    for F in range(1, 1 << fam.size):
        value, blocks = dilworth_partition(g, F, cap)
        got = section.span_dim(F)
        rows.append(
            {
                "subset": bits(F),
                "section_dim": got,
                "truncation": value,
                "partition": [bits(B) for B in blocks],
                "pass": got == value,
            }
        )
    return rows


def verify_section_dilworth(fam: SubspaceFamily, k: int, seed=0, cap: int | None = DEFAULT_CAP) -> dict:
    """Compare section spans with the truncation of ``dim<.> - k`` on every nonempty subset.

    A random section can fail to be generic with tiny probability, so one
    mismatch triggers a single rerun with a fresh section.
    """
    if cap is not None and fam.size > cap:
        raise CapExceeded(fam.size, cap, field="members")
    children = np.random.SeedSequence(seed).spawn(2)
    for attempt, child in enumerate(children):
        section = random_section(fam, k, np.random.default_rng(child))
        rows = _compare(fam, section, k, cap)
        ok = all(r["pass"] for r in rows)
        if ok:
            break
    report = {
        "codim": k,
        "members": fam.size,
        "ambient": fam.ambient_dim,
        "section_dims": section.dims,
        "attempts": attempt + 1,
        "subsets": rows,
        "ok": ok,
    }
    if k == 1 and fam.size:
        connected = is_connected_family(section, cap)
        drop = fam.span_dim() - section.span_dim()
        report["section_connected"] = connected
        report["span_drop"] = drop
        if connected and drop != 1:
            report["ok"] = False
    return report


def is_connected_family(fam: SubspaceFamily, cap: int | None = DEFAULT_CAP) -> bool:
    """True iff ``<A_F'>`` and ``<A_F''>`` meet nontrivially for every bipartition of the family."""
    m = fam.size
    if cap is not None and m > cap:
        raise CapExceeded(m, cap, field="members")
    if m <= 1:
        return True
    full = full_mask(m)
    total = fam.span_dim(full)
    dims = {}
    top = 1 << (m - 1)
    # fix element m-1 on the F'' side so each bipartition is visited once
    for Fp in submasks(full ^ top):
        if Fp == 0:
            continue
        Fq = full ^ Fp
        for S in (Fp, Fq):
            if S not in dims:
                dims[S] = fam.span_dim(S)
        if dims[Fp] + dims[Fq] - total == 0:
            return False
    return True
