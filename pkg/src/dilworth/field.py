"""Exact linear algebra over a prime field GF(p).

Matrices are dense ``int64`` numpy arrays with entries in ``[0, p)``.  The
default prime is below 2**31, so a product of two reduced entries fits in a
signed 64-bit word and elimination can run vectorised without overflow.

Generic complex points are modelled by uniform samples from GF(p); a rank
computed at such a point can only undershoot the generic rank, which is why
callers amplify by taking the maximum over several seeded trials.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from .errors import DimensionMismatch, InputError

DEFAULT_PRIME = 2130706433  # 127 * 2**24 + 1
DEFAULT_TRIALS = 3
_MAX_PRIME = 2**31


def check_prime(p: int) -> int:
    """Validate a user supplied modulus and return it."""
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise InputError(f"prime must be an integer, got {p!r}", field="prime")
    p = int(p)
    if p < 5 or p >= _MAX_PRIME:
        raise InputError(f"prime must lie in [5, 2**31), got {p}", field="prime")
    if not sympy.isprime(p):
        raise InputError(f"{p} is not prime", field="prime")
    if p % 4 != 1:
        raise InputError(f"{p} is not 1 mod 4; -1 has no square root", field="prime")
    return p


@lru_cache(maxsize=None)
def sqrt_minus_one(p: int = DEFAULT_PRIME) -> int:
    """The smallest square root of -1 in GF(p)."""
    roots = sympy.sqrt_mod(p - 1, p, all_roots=True)
    if not roots:
        raise InputError(f"-1 is not a square modulo {p}", field="prime")
    return int(min(roots))


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def trial_rngs(seed: int, trials: int = DEFAULT_TRIALS) -> list[np.random.Generator]:
    """Independent generators for repeated generic-rank evaluations."""
    if trials < 1:
        raise InputError("trials must be at least 1", field="trials")
    children = np.random.SeedSequence(seed).spawn(trials)
    return [np.random.default_rng(c) for c in children]


# --------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class FieldScalar:
    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise DimensionMismatch("scalars from different fields")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldScalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in GF(p)")
        return FieldScalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldScalar(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ConjScalar:
    """``re + i*im`` with a formal conjugation ``re - i*im``.

    Arithmetic is that of GF(p)[t]/(t^2 + 1).  Evaluating ``t`` at the fixed
    square root of -1 gives :attr:`value`; evaluating at the other root gives
    the value of the conjugate.
    """

    re: int
    im: int = 0
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re) % self.p)
        object.__setattr__(self, "im", int(self.im) % self.p)

    def _coerce(self, other) -> "ConjScalar":
        if isinstance(other, ConjScalar):
            return other
        return ConjScalar(int(other), 0, self.p)

    def conjugate(self):
        return ConjScalar(self.re, -self.im, self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return ConjScalar(self.re + o.re, self.im + o.im, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ConjScalar(self.re - o.re, self.im - o.im, self.p)

    def __neg__(self):
        return ConjScalar(-self.re, -self.im, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return ConjScalar(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.p
        )

    __rmul__ = __mul__

    @property
    def value(self) -> int:
        return (self.re + sqrt_minus_one(self.p) * self.im) % self.p


# --------------------------------------------------------------------------
# matrices


def _as_array(entries, p: int) -> np.ndarray:
    arr = np.array(entries, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionMismatch("matrix entries must form a 2-d array", field="entries")
    out = np.empty(arr.shape, dtype=np.int64)
    for idx, v in np.ndenumerate(arr):
        out[idx] = int(v) % p
    return out


class ExactMatrix:
    """Immutable dense matrix over GF(p)."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int = DEFAULT_PRIME):
        if (
            isinstance(entries, np.ndarray)
            and entries.ndim == 2
            and np.issubdtype(entries.dtype, np.integer)
        ):
            a = np.mod(entries.astype(np.int64), p)
        else:
            a = _as_array(entries, p)
        a.setflags(write=False)
        self.a = a
        self.p = p

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME):
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME):
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def entries(self) -> list[int]:
        return [int(v) for v in self.a.ravel()]

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.a]

    def row_subset(self, rows: Iterable[int]) -> "ExactMatrix":
        return ExactMatrix(self.a[list(rows), :], self.p)

    def col_subset(self, cols: Iterable[int]) -> "ExactMatrix":
        return ExactMatrix(self.a[:, list(cols)], self.p)

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(np.ascontiguousarray(self.a.T), self.p)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return ExactMatrix(matmul_mod(self.a, other.a, self.p), self.p)
        vec = np.asarray(other, dtype=np.int64).reshape(-1, 1)
        return matmul_mod(self.a, vec, self.p).ravel()

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, p={self.p})"

    def zero_rows(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(~self.a.any(axis=1))]


def hstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    if not mats:
        raise InputError("cannot stack an empty list of matrices")
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise DimensionMismatch(f"row counts differ: {sorted(rows)}")
    return ExactMatrix(np.hstack([m.a for m in mats]), mats[0].p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p; accumulates one rank-one update at a time."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = (out + np.outer(a[:, k], b[k, :]) % p) % p
    return out


def _rank(a: np.ndarray, p: int) -> int:
    R = a.copy()
    m, n = R.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        below = R[r + 1 :, c] * inv % p
        hit = np.flatnonzero(below)
        if hit.size:
            rows = r + 1 + hit
            R[rows] = (R[rows] - np.outer(below[hit], R[r]) % p) % p
        r += 1
    return r


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` and its pivot columns."""
    R = np.mod(a, p).astype(np.int64)
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        R[r] = R[r] * inv % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit] = (R[hit] - np.outer(col[hit], R[r]) % p) % p
        pivots.append(c)
        r += 1
    return R, pivots


def nullspace(a: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right kernel ``{x : a x = 0}``."""
    n = a.shape[1]
    R, pivots = rref(a, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return basis


def mat_rank(M: ExactMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return _rank(M.a, M.p)


def mat_left_kernel(M: ExactMatrix) -> list[list[int]]:
    """Basis of ``{v : v^T M = 0}``; its size is ``rows - rank``."""
    if M.rows == 0:
        return []
    if M.cols == 0:
        return [[int(i == j) for j in range(M.rows)] for i in range(M.rows)]
    return [[int(x) for x in v] for v in nullspace(np.ascontiguousarray(M.a.T), M.p)]


def column_basis(M: ExactMatrix) -> ExactMatrix:
    """An independent subset of the columns of ``M`` with the same span."""
    if M.rows == 0 or M.cols == 0:
        return ExactMatrix(np.zeros((M.rows, 0), dtype=np.int64), M.p)
    _, pivots = rref(M.a, M.p)
    return M.col_subset(pivots)


def random_vector(dim: int, rng, p: int = DEFAULT_PRIME) -> np.ndarray:
    if dim < 0:
        raise InputError("dimension must be nonnegative", field="dim")
    return as_rng(rng).integers(0, p, size=dim, dtype=np.int64)


def random_matrix(rows: int, cols: int, rng, p: int = DEFAULT_PRIME, nonzero=False) -> ExactMatrix:
    rng = as_rng(rng)
    lo = 1 if nonzero else 0
    return ExactMatrix(rng.integers(lo, p, size=(rows, cols), dtype=np.int64), p)


# --------------------------------------------------------------------------
# conjugate-pair matrices


class ConjMatrix:
    """Matrix with :class:`ConjScalar` entries stored as two GF(p) arrays."""

    __slots__ = ("re", "im", "p")

    def __init__(self, re, im=None, p: int = DEFAULT_PRIME):
        re = ExactMatrix(re, p).a
        im = np.zeros_like(re) if im is None else ExactMatrix(im, p).a
        if re.shape != im.shape:
            raise DimensionMismatch("real and imaginary parts differ in shape")
        self.re = re
        self.im = im
        self.p = p

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence[ConjScalar]], p: int = DEFAULT_PRIME):
        re = [[int(x.re) for x in row] for row in rows]
        im = [[int(x.im) for x in row] for row in rows]
        return cls(re, im, p)

    @property
    def shape(self):
        return self.re.shape

    def __getitem__(self, idx) -> ConjScalar:
        i, j = idx
        return ConjScalar(int(self.re[i, j]), int(self.im[i, j]), self.p)

    def conj(self) -> "ConjMatrix":
        return ConjMatrix(self.re, (-self.im) % self.p, self.p)

    def embed(self) -> ExactMatrix:
        """Entrywise ``re + i*im`` as a GF(p) matrix."""
        i = sqrt_minus_one(self.p)
        return ExactMatrix((self.re + self.im * i % self.p) % self.p, self.p)

    def zero_rows(self) -> list[int]:
        return self.embed().zero_rows()

    def __eq__(self, other):
        return (
            isinstance(other, ConjMatrix)
            and self.p == other.p
            and np.array_equal(self.re, other.re)
            and np.array_equal(self.im, other.im)
        )

    def __repr__(self):
        return f"ConjMatrix({self.shape[0]}x{self.shape[1]}, p={self.p})"


def random_conj_vector(dim: int, rng, p: int = DEFAULT_PRIME) -> list[ConjScalar]:
    rng = as_rng(rng)
    re = random_vector(dim, rng, p)
    im = random_vector(dim, rng, p)
    return [ConjScalar(int(a), int(b), p) for a, b in zip(re, im)]


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Column span of ``basis``; the columns are kept linearly independent."""

    basis: ExactMatrix

    def __post_init__(self):
        if mat_rank(self.basis) != self.basis.cols:
            raise InputError("subspace basis columns are dependent", field="basis")

    @classmethod
    def span(cls, M: ExactMatrix) -> "Subspace":
        return cls(column_basis(M))

    @classmethod
    def zero(cls, n: int, p: int = DEFAULT_PRIME) -> "Subspace":
        return cls(ExactMatrix(np.zeros((n, 0), dtype=np.int64), p))

    @property
    def ambient_dim(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def p(self) -> int:
        return self.basis.p

    def contains(self, other: "Subspace") -> bool:
        return subspace_sum([self, other]).dim == self.dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains(other)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.dim))


def _common_ambient(spaces: Sequence[Subspace]) -> int:
    dims = {s.ambient_dim for s in spaces}
    if len(dims) != 1:
        raise DimensionMismatch(f"ambient dimensions differ: {sorted(dims)}", field="ambient")
    return dims.pop()


def subspace_sum(family: Sequence[Subspace]) -> Subspace:
    family = list(family)
    if not family:
        raise InputError("empty family has no ambient space", field="family")
    n = _common_ambient(family)
    mats = [s.basis for s in family if s.dim]
    if not mats:
        return Subspace.zero(n, family[0].p)
    return Subspace.span(hstack(mats))


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    n = _common_ambient([A, B])
    p = A.p
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(n, p)
    stacked = np.hstack([A.basis.a, (-B.basis.a) % p])
    kernel = nullspace(stacked, p)
    if not kernel:
        return Subspace.zero(n, p)
    coeffs = np.stack([v[: A.dim] for v in kernel], axis=1)
    return Subspace.span(ExactMatrix(matmul_mod(A.basis.a, coeffs, p), p))
