"""Integer set functions on ``{0, ..., m-1}`` and their Dilworth truncations.

Subsets are plain ``int`` bitmasks throughout; any function taking a subset
also accepts an iterable of element indices.

Minimisations over partitions are exact.  The default ``"dp"`` route runs a
subset dynamic programme (``3**|F|`` steps) that fixes the block holding the
lowest remaining element; the ``"enumerate"`` route walks every set partition
as a restricted growth string and is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import CapExceeded, InputError

DEFAULT_CAP = 12


# --------------------------------------------------------------------------
# bitmask helpers


def to_mask(F) -> int:
    if isinstance(F, (int, np.integer)) and not isinstance(F, bool):
        if F < 0:
            raise InputError("subset mask must be nonnegative", field="subset")
        return int(F)
    mask = 0
    for e in F:
        e = int(e)
        if e < 0:
            raise InputError(f"negative element {e}", field="subset")
        mask |= 1 << e
    return mask


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(m: int) -> int:
    return (1 << m) - 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, the empty set last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _check_cap(mask: int, cap: int | None):
    if cap is not None and popcount(mask) > cap:
        raise CapExceeded(popcount(mask), cap)


# --------------------------------------------------------------------------
# set function oracles


class SetFunction:
    """Integer valued function on subsets of ``{0, ..., m-1}``.

    Values are cached per bitmask.  ``monotone`` and ``submodular`` record
    claims made by the caller; a submodularity claim is spot-checked on
    random triples at construction.
    """

    def __init__(
        self,
        m: int,
        fn: Callable[[int], int] | None = None,
        *,
        monotone: bool = False,
        submodular: bool = False,
        spot_checks: int = 200,
        seed: int = 0,
        name: str | None = None,
    ):
        if m < 0:
            raise InputError("ground set size must be nonnegative", field="m")
        self.m = m
        self._fn = fn
        self._memo: dict[int, int] = {}
        self.monotone = monotone
        self.submodular = submodular
        self.name = name or type(self).__name__
        if submodular and spot_checks:
            if not check_submodular(self, spot_checks, seed):
                raise InputError(f"{self.name} failed the submodularity spot-check")

    def _eval(self, mask: int) -> int:
        if self._fn is None:
            raise NotImplementedError
        return int(self._fn(mask))

    def __call__(self, F) -> int:
        mask = to_mask(F)
        if mask >> self.m:
            raise InputError(f"subset {bits(mask)} leaves the ground set of size {self.m}", field="subset")
        try:
            return self._memo[mask]
        except KeyError:
            pass
        value = self._eval(mask)
        self._memo[mask] = value
        return value

    # fast paths; subclasses that know a closed form override these
    def fast_matroid_rank(self, mask: int) -> int | None:
        return None

    def loops(self) -> int:
        """Elements ``e`` with ``f({e}) <= 0``."""
        return to_mask(e for e in range(self.m) if self(1 << e) <= 0)

    # arithmetic builds shifted sums
    def _terms(self):
        return [(1, self)], 0

    def __add__(self, other):
        terms, shift = self._terms()
        if isinstance(other, SetFunction):
            t2, s2 = other._terms()
            _same_ground(self, other)
            return ShiftedSum(terms + t2, shift + s2, self.m)
        return ShiftedSum(terms, shift + int(other), self.m)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SetFunction):
            return self + (-1) * other
        return self + (-int(other))

    def __mul__(self, c):
        c = int(c)
        terms, shift = self._terms()
        return ShiftedSum([(c * a, f) for a, f in terms], c * shift, self.m)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def truncation(self) -> "TruncationFunction":
        return TruncationFunction(self)

    def matroid_rank(self) -> "MatroidRankFunction":
        return MatroidRankFunction(self)

    def __repr__(self):
        return f"{self.name}(m={self.m})"


def _same_ground(f, g):
    if f.m != g.m:
        raise InputError(f"ground sets differ: {f.m} vs {g.m}", field="terms")


class TableFunction(SetFunction):
    def __init__(self, m: int, values: dict, **kw):
        self.values = {to_mask(int(k) if isinstance(k, str) else k): int(v) for k, v in values.items()}
        super().__init__(m, **kw)

    def _eval(self, mask):
        try:
            return self.values[mask]
        except KeyError:
            raise InputError(f"table has no value for subset {mask}", field="values") from None


class ShiftedSum(SetFunction):
    """``sum(c_i * f_i) + shift``; the shift applies to the empty set too."""

    def __init__(self, terms, shift: int, m: int | None = None):
        terms = [(int(c), f) for c, f in terms if c != 0]
        if m is None:
            if not terms:
                raise InputError("shifted sum needs a ground set", field="terms")
            m = terms[0][1].m
        for _, f in terms:
            if f.m != m:
                raise InputError(f"ground sets differ: {f.m} vs {m}", field="terms")
        self.terms = terms
        self.shift = int(shift)
        super().__init__(m)

    def _terms(self):
        return list(self.terms), self.shift

    def _eval(self, mask):
        return sum(c * f(mask) for c, f in self.terms) + self.shift

    def __repr__(self):
        parts = [f"{c}*{f!r}" for c, f in self.terms]
        return " + ".join(parts) + f" + ({self.shift})"


class TruncationFunction(SetFunction):
    """``f^D`` as an oracle; answers every subset of a queried set from one table."""

    def __init__(self, f: SetFunction, cap: int | None = DEFAULT_CAP):
        self.f = f
        self.cap = cap
        self._tables: list[tuple[int, list[int], dict]] = []
        super().__init__(f.m, name=f"({f.name})^D")

    def _table_value(self, mask: int, singleton) -> int:
        for dom, elems, table in self._tables:
            if mask & ~dom == 0:
                return table[_compress(mask, elems)]
        _check_cap(mask, self.cap)
        elems = bits(mask)
        weights = _weights(self.f, elems, singleton)
        table, _ = _partition_dp(weights)
        self._tables.append((mask, elems, table))
        return table[-1]

    def _eval(self, mask):
        if mask == 0:
            return 0
        return self._table_value(mask, None)


class MatroidRankFunction(TruncationFunction):
    """``f^MD``: rank function of the matroid induced by ``f``."""

    def __init__(self, f: SetFunction, cap: int | None = DEFAULT_CAP, fast: bool = True):
        super().__init__(f, cap)
        self.fast = fast
        self.name = f"({f.name})^MD"

    def _eval(self, mask):
        if mask == 0:
            return 0
        if self.fast:
            v = self.f.fast_matroid_rank(mask)
            if v is not None:
                return v
        return self._table_value(mask, 1)

    def fast_matroid_rank(self, mask):
        # a matroid rank function induces itself
        return self(mask)


def _compress(mask: int, elems: list[int]) -> int:
    out = 0
    for i, e in enumerate(elems):
        if mask >> e & 1:
            out |= 1 << i
    return out


def _expand(cmask: int, elems: list[int]) -> int:
    out = 0
    i = 0
    while cmask:
        if cmask & 1:
            out |= 1 << elems[i]
        cmask >>= 1
        i += 1
    return out


def _weights(f: SetFunction, elems: list[int], singleton_cap) -> list[int]:
    k = len(elems)
    w = [0] * (1 << k)
    for c in range(1, 1 << k):
        w[c] = f(_expand(c, elems))
    if singleton_cap is not None:
        for i in range(k):
            w[1 << i] = min(w[1 << i], singleton_cap)
    return w


def _partition_dp(w: list[int]):
    """Minimum block-weight partition of every subset of ``range(k)``.

    Returns the value table and, per subset, the block containing its lowest
    element in an optimal partition.
    """
    size = len(w)
    table = [0] * size
    choice = [0] * size
    for S in range(1, size):
        low = S & -S
        rest = S ^ low
        best = math.inf
        arg = low
        sub = rest
        while True:
            B = low | sub
            v = w[B] + table[S ^ B]
            if v < best:
                best = v
                arg = B
            if sub == 0:
                break
            sub = (sub - 1) & rest
        table[S] = best
        choice[S] = arg
    return table, choice


def _unwind(choice, S) -> list[int]:
    blocks = []
    while S:
        B = choice[S]
        blocks.append(B)
        S ^= B
    return blocks


# --------------------------------------------------------------------------
# partitions


def enumerate_partitions(F, cap: int | None = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Every set partition of ``F`` exactly once, as tuples of block masks.

    Partitions are produced in restricted-growth-string order: element ``i``
    (in increasing order) goes to block ``a[i]`` with
    ``a[i] <= 1 + max(a[:i])``.
    """
    mask = to_mask(F)
    _check_cap(mask, cap)
    elems = bits(mask)
    n = len(elems)
    if n == 0:
        yield ()
        return
    a = [0] * n
    peak = [0] * n  # peak[i] = max(a[:i+1])
    while True:
        blocks = [0] * (peak[-1] + 1)
        for e, b in zip(elems, a):
            blocks[b] |= 1 << e
        yield tuple(blocks)
        i = n - 1
        while i > 0 and a[i] > peak[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        peak[i] = max(peak[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            peak[j] = peak[i]


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


# --------------------------------------------------------------------------
# Dilworth truncation and the induced matroid


def dilworth_partition(f: SetFunction, F, cap: int | None = DEFAULT_CAP, method: str = "dp"):
    """``(f^D(F), optimal partition)``; the empty set gives ``(0, [])``."""
    mask = to_mask(F)
    if mask == 0:
        return 0, []
    _check_cap(mask, cap)
    if method == "enumerate":
        best, arg = math.inf, None
        for part in enumerate_partitions(mask, cap=None):
            v = sum(f(B) for B in part)
            if v < best:
                best, arg = v, list(part)
        return best, arg
    if method != "dp":
        raise InputError(f"unknown method {method!r}", field="method")
    elems = bits(mask)
    table, choice = _partition_dp(_weights(f, elems, None))
    full = len(table) - 1
    return table[full], [_expand(B, elems) for B in _unwind(choice, full)]


def dilworth_truncation(f: SetFunction, F, cap: int | None = DEFAULT_CAP, method: str = "dp") -> int:
    return dilworth_partition(f, F, cap, method)[0]


def dilworth_matroid_witness(f: SetFunction, F, cap: int | None = DEFAULT_CAP, method: str = "dp"):
    """``(f^MD(F), F0, blocks)`` attaining the minimum of ``|F0| + sum f(F_i)``."""
    mask = to_mask(F)
    if mask == 0:
        return 0, 0, []
    _check_cap(mask, cap)
    if method == "enumerate":
        best, arg = math.inf, None
        for F0 in submasks(mask):
            rest = mask ^ F0
            v, part = dilworth_partition(f, rest, cap=None, method="enumerate")
            v += popcount(F0)
            if v < best:
                best, arg = v, (F0, part)
        return best, arg[0], arg[1]
    if method != "dp":
        raise InputError(f"unknown method {method!r}", field="method")
    elems = bits(mask)
    w = _weights(f, elems, None)
    h = list(w)
    for i in range(len(elems)):
        h[1 << i] = min(h[1 << i], 1)
    table, choice = _partition_dp(h)
    full = len(table) - 1
    F0 = 0
    blocks = []
    for B in _unwind(choice, full):
        if popcount(B) == 1 and w[B] > 1:
            F0 |= B
        else:
            blocks.append(_expand(B, elems))
    return table[full], _expand(F0, elems), blocks


def dilworth_matroid_rank(
    f: SetFunction, F, cap: int | None = DEFAULT_CAP, method: str = "dp", fast: bool = True
) -> int:
    """``f^MD(F) = min |F0| + sum f(F_i)`` over ``F0`` and partitions of ``F - F0``.

    For a monotone submodular ``f`` that is nonnegative on nonempty sets this
    is the rank function of the matroid induced by ``f``.  Count functions
    answer through the pebble game unless ``fast`` is false.
    """
    mask = to_mask(F)
    if mask == 0:
        return 0
    if fast and method == "dp":
        v = f.fast_matroid_rank(mask)
        if v is not None:
            return v
    return dilworth_matroid_witness(f, mask, cap, method)[0]


def induced_rank(f: SetFunction, F, cap: int | None = DEFAULT_CAP) -> int:
    """``min |F - I| + f(I)`` over all ``I`` inside ``F`` (the empty set included)."""
    mask = to_mask(F)
    _check_cap(mask, cap)
    n = popcount(mask)
    return min(n - popcount(I) + f(I) for I in submasks(mask))


def induced_independent(f: SetFunction, F, cap: int | None = DEFAULT_CAP, fast: bool = True) -> bool:
    """True iff ``|I| <= f(I)`` for every nonempty ``I`` inside ``F``."""
    mask = to_mask(F)
    if mask == 0:
        return True
    if fast:
        v = f.fast_matroid_rank(mask)
        if v is not None:
            return v == popcount(mask)
    _check_cap(mask, cap)
    return all(popcount(I) <= f(I) for I in submasks(mask) if I)


def max_independent_size(f: SetFunction, F, cap: int | None = DEFAULT_CAP) -> int:
    """Largest ``I`` inside ``F`` passing :func:`induced_independent`, by brute force."""
    mask = to_mask(F)
    _check_cap(mask, cap)
    indep = {0: True}
    best = 0
    for I in sorted(submasks(mask), key=popcount):
        if I == 0:
            continue
        ok = popcount(I) <= f(I) and all(indep[I ^ (1 << e)] for e in bits(I))
        indep[I] = ok
        if ok:
            best = max(best, popcount(I))
    return best


# --------------------------------------------------------------------------
# spot checks


def _random_subset(rng, m):
    return int(sum(1 << i for i in range(m) if rng.random() < 0.5))


def check_submodular(f: SetFunction, samples: int = 200, seed=0) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        X = _random_subset(rng, f.m)
        Y = _random_subset(rng, f.m)
        if f(X) + f(Y) < f(X | Y) + f(X & Y):
            return False
    return True


def check_monotone(f: SetFunction, samples: int = 200, seed=0) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        Y = _random_subset(rng, f.m)
        X = Y & _random_subset(rng, f.m)
        if f(X) > f(Y):
            return False
    return True


def is_matroid_rank(r: SetFunction, ground=None) -> bool:
    """Exhaustive check of the rank axioms on every subset of ``ground``."""
    mask = full_mask(r.m) if ground is None else to_mask(ground)
    subs = list(submasks(mask))
    val = {S: r(S) for S in subs}
    for S in subs:
        if not 0 <= val[S] <= popcount(S):
            return False
        for e in bits(mask & ~S):
            if val[S | (1 << e)] < val[S]:
                return False
    for X in subs:
        for Y in subs:
            if val[X] + val[Y] < val[X | Y] + val[X & Y]:
                return False
    return True


def from_callable(m: int, fn: Callable[[Iterable[int]], int], **kw) -> SetFunction:
    """Wrap a function of element lists as a :class:`SetFunction`."""
    return SetFunction(m, lambda mask: fn(bits(mask)), **kw)
