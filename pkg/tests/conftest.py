from __future__ import annotations

import itertools

import numpy as np
import pytest

from dilworth.amoeba import ConjSpaceRep
from dilworth.field import DEFAULT_PRIME, ConjMatrix, ExactMatrix
from dilworth.matroids import Graph, complete_graph

P = DEFAULT_PRIME


def sparse_matrix(rows, cols, rng, density=0.5, p=P) -> ExactMatrix:
    """Random matrix with a random support pattern and no zero rows."""
    while True:
        mask = rng.random((rows, cols)) < density
        vals = rng.integers(1, p, size=(rows, cols))
        a = np.where(mask, vals, 0)
        if rows == 0 or a.any(axis=1).all():
            return ExactMatrix(a, p)


def random_space(rng, m, n, real=False, density=0.6, p=P) -> ConjSpaceRep:
    """Pair matrix with a random support pattern, one nonzero per row at least."""
    mask = rng.random((m, n)) < density
    mask[np.arange(m), rng.integers(0, n, size=m)] = True
    re = rng.integers(1, p, size=(m, n)) * mask
    im = np.zeros_like(re) if real else rng.integers(1, p, size=(m, n)) * mask
    return ConjSpaceRep(ConjMatrix(re, im, p))


def random_graph(rng, max_vertices=8, max_edges=None, connected=False, multi=False) -> Graph:
    while True:
        n = int(rng.integers(2, max_vertices + 1))
        pairs = list(itertools.combinations(range(n), 2))
        hi = len(pairs) if max_edges is None else min(max_edges, len(pairs) + (4 if multi else 0))
        m = int(rng.integers(1, hi + 1))
        if multi:
            idx = rng.integers(0, len(pairs), size=m)
        else:
            idx = rng.choice(len(pairs), size=min(m, len(pairs)), replace=False)
        G = Graph(n, tuple(pairs[i] for i in sorted(idx)))
        if not connected or G.is_connected():
            return G


def independent_family(indep_of_mask, m):
    """Downward-closed family of subsets, built bottom up from a per-set test."""
    family = set()
    for I in sorted(range(1 << m), key=lambda x: bin(x).count("1")):
        if I == 0 or (indep_of_mask(I) and all((I & ~(1 << e)) in family for e in range(m) if I >> e & 1)):
            family.add(I)
    return family


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def triangle():
    return complete_graph(3)
