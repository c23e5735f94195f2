"""Builders and end-to-end checks for the two counterexamples to the
``r_1 + ... + r_d - (d-1)`` characterisation of Hadamard products."""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .errors import VerificationFailure
from .field import DEFAULT_PRIME, DEFAULT_TRIALS, ExactMatrix, mat_left_kernel, mat_rank, matmul_mod
from .hadamard import (
    HadamardInstance,
    PairRank,
    conjecture_value,
    nested_upper_bound,
    numeric_rank_trials,
    sigma_bracketing,
)
from .matroids import (
    CountFunction,
    DPartiteHypergraph,
    Graph,
    bicircular_representation,
    count_matroid_rank,
    graphic_representation,
    hypergraph_incidence,
    partition_matroid_representation,
    pebble_game_rank,
)
from .setfunc import ShiftedSum, full_mask, induced_independent

GADGETS = 4
HUB0 = 16


def ring_gadget_vertices(g: int) -> list[int]:
    """Vertices of gadget ``g``: four private ones, then its two hubs."""
    return [4 * g + j for j in range(4)] + [HUB0 + g, HUB0 + (g + 1) % GADGETS]


def gadget_ring_graph() -> Graph:
    """Four copies of K6 minus an edge glued in a ring.

    Gadget ``g`` owns vertices ``4g..4g+3`` and the hubs ``16+g`` and
    ``16+(g+1)%4``; the missing edge of each gadget is the one joining its
    two hubs, so consecutive gadgets share exactly one vertex.
    """
    edges = []
    for g in range(GADGETS):
        vs = ring_gadget_vertices(g)
        for a, b in combinations(range(6), 2):
            if (a, b) != (4, 5):
                edges.append((vs[a], vs[b]))
    return Graph(20, tuple(edges))


def ring_gadget_edges(g: int) -> int:
    """Edge mask of gadget ``g`` in :func:`gadget_ring_graph`."""
    return ((1 << 14) - 1) << (14 * g)


# the 6 x 9 incidence matrix as displayed, rows in lexicographic order of (j1, j2, j3)
PERMUTATION_INCIDENCE = (
    (1, 0, 0, 0, 1, 0, 0, 0, 1),
    (1, 0, 0, 0, 0, 1, 0, 1, 0),
    (0, 1, 0, 1, 0, 0, 0, 0, 1),
    (0, 1, 0, 0, 0, 1, 1, 0, 0),
    (0, 0, 1, 1, 0, 0, 0, 1, 0),
    (0, 0, 1, 0, 1, 0, 1, 0, 0),
)
PERMUTATION_SIGNS = (1, -1, -1, 1, 1, -1)


def permutation_hypergraph() -> DPartiteHypergraph:
    """3-partite 3-uniform hypergraph on 3+3+3 vertices whose edges are the permutations of (0, 1, 2)."""
    return DPartiteHypergraph((3, 3, 3), tuple(permutations(range(3))))


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _hyperedges_of(matrix, sizes) -> list[tuple[int, ...]]:
    out = []
    for row in matrix:
        tup, off = [], 0
        for n in sizes:
            block = list(row[off : off + n])
            if sorted(block) != [0] * (n - 1) + [1]:
                return []
            tup.append(block.index(1))
            off += n
        out.append(tuple(tup))
    return out


def same_hypergraph_up_to_relabelling(A, B, sizes) -> bool:
    """Do two incidence matrices agree after permuting rows, vertices within
    each class, and classes of equal size?"""
    ea, eb = _hyperedges_of(A, sizes), _hyperedges_of(B, sizes)
    if not ea or len(ea) != len(eb):
        return False
    target = sorted(eb)
    d = len(sizes)
    for classes in permutations(range(d)):
        if any(sizes[c] != sizes[i] for i, c in enumerate(classes)):
            continue
        relabels = [list(permutations(range(sizes[i]))) for i in range(d)]
        for choice in _product(relabels):
            mapped = sorted(tuple(choice[c][e[c]] for c in classes) for e in ea)
            if mapped == target:
                return True
    return False


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


def _check(checks: dict, name: str, value, expected, ok: bool):
    checks[name] = {"value": value, "expected": expected, "pass": bool(ok)}


def _finish(report: dict, strict: bool) -> dict:
    failed = [k for k, v in report["checks"].items() if not v["pass"]]
    report["failed"] = failed
    report["ok"] = not failed
    if strict and failed:
        raise VerificationFailure(failed[0], f"got {report['checks'][failed[0]]['value']!r}")
    return report


def verify_counterexample1(seed: int = 0, trials: int = DEFAULT_TRIALS, p: int = DEFAULT_PRIME, strict: bool = False) -> dict:
    G = gadget_ring_graph()
    n, m = G.vertex_count, G.edge_count
    E = full_mask(m)
    checks: dict = {}
    _check(checks, "shape", [n, m], [20, 56], (n, m) == (20, 56) and m == 3 * n - 4)
    gadgets_ok = all(
        pebble_game_rank(CountFunction(G, 3, 4), ring_gadget_edges(g)) == 14
        and len(G.vertex_span(ring_gadget_edges(g))) == 6
        for g in range(GADGETS)
    )
    _check(checks, "gadgets_tight", gadgets_ok, True, gadgets_ok)

    r34 = pebble_game_rank(CountFunction(G, 3, 4), E)
    _check(checks, "a_rank_34", r34, 3 * n - 4, r34 == 3 * n - 4)
    r23 = pebble_game_rank(CountFunction(G, 2, 3), E)
    _check(checks, "b_rank_23", r23, 36, r23 == 36)

    rng = np.random.default_rng(seed)
    graphic = graphic_representation(G, p=p)
    bicirc = bicircular_representation(G, rng, p=p)
    r10 = pebble_game_rank(CountFunction(G, 1, 0), E)
    rb = bicirc.rank()
    _check(checks, "c_rank_bicircular", rb, 20, rb == r10 == 20)
    rg = graphic.rank()
    _check(checks, "graphic_rank", rg, n - 1, rg == pebble_game_rank(CountFunction(G, 1, 1), E) == n - 1)

    inst = HadamardInstance.of(graphic.rep, graphic.rep, bicirc.rep)
    # trivial partition certifies the upper bound; the linear route certifies the lower one
    certificate = r23 + r10 - 1
    bound = nested_upper_bound(inst, E, ((0, 1), 2), method="linear", seed=seed, trials=trials)
    _check(checks, "d_nested_bound", bound, 55, bound <= certificate == 55 and bound == 55)

    ranks = [count_matroid_rank(G, 1, 1), count_matroid_rank(G, 1, 1), count_matroid_rank(G, 1, 0)]
    conj = conjecture_value(ranks, E)
    _check(checks, "e_conjecture_value", conj, 56, conj == 56)

    numeric_trials = numeric_rank_trials(inst, E, seed, trials)
    numeric = max(numeric_trials)
    _check(checks, "f_numeric_dimension", numeric, "<= 55", numeric <= certificate)

    violated = numeric < conj and certificate < conj
    report = {
        "counterexample": 1,
        "vertices": n,
        "edges": m,
        "rank_34": r34,
        "rank_23": r23,
        "rank_bicircular": rb,
        "nested_bound": bound,
        "conjecture_value": conj,
        "numeric_dimension": numeric,
        "trials": numeric_trials,
        "gap": conj - numeric,
        "verdict": "violated" if violated else "not violated",
        "checks": checks,
    }
    _check(checks, "verdict", report["verdict"], "violated", violated)
    return _finish(report, strict)


def verify_counterexample2(seed: int = 0, trials: int = DEFAULT_TRIALS, p: int = DEFAULT_PRIME, strict: bool = False) -> dict:
    H = permutation_hypergraph()
    checks: dict = {}
    I_G = hypergraph_incidence(H, p)
    displayed = np.array(PERMUTATION_INCIDENCE, dtype=np.int64)
    same = same_hypergraph_up_to_relabelling(I_G.tolist(), PERMUTATION_INCIDENCE, H.class_sizes)
    _check(checks, "a_incidence_matches", same, True, same)

    rank = mat_rank(I_G)
    _check(checks, "b_incidence_rank", rank, 5, rank == 5)

    signs = [permutation_sign(e) for e in H.edges]
    sv = np.array([[s % p for s in signs]], dtype=np.int64)
    in_kernel = not matmul_mod(sv, I_G.a, p).any()
    shown = np.array([[s % p for s in PERMUTATION_SIGNS]], dtype=np.int64)
    shown_in_kernel = not matmul_mod(shown, np.mod(displayed, p), p).any()
    kernel = mat_left_kernel(I_G)
    proportional = len(kernel) == 1 and mat_rank(ExactMatrix([kernel[0], [s % p for s in signs]], p)) == 1
    ok_c = in_kernel and shown_in_kernel and proportional and tuple(signs) == PERMUTATION_SIGNS
    _check(checks, "c_sign_vector_in_kernel", signs, list(PERMUTATION_SIGNS), ok_c)

    reps = [partition_matroid_representation(H, i, p) for i in range(3)]
    ranks = [r.rank_function() for r in reps]
    inst = HadamardInstance.of(*(r.rep for r in reps))
    E = full_mask(len(H.edges))
    indep = {}
    bounds = {}
    for sigma in permutations(range(3)):
        a, b, c = sigma
        g = ShiftedSum([(1, PairRank(ranks[a], ranks[b])), (1, ranks[c])], -1)
        indep["".join(str(s + 1) for s in sigma)] = induced_independent(g, E)
        bounds["".join(str(s + 1) for s in sigma)] = nested_upper_bound(inst, E, sigma_bracketing(sigma), method="combinatorial")
    all_indep = all(indep.values()) and all(v == 6 for v in bounds.values())
    _check(checks, "d_independent_all_permutations", indep, "all true", all_indep)

    conj = conjecture_value(ranks, E)
    _check(checks, "e_conjecture_value", conj, 6, conj == 6)

    numeric_trials = numeric_rank_trials(inst, E, seed, trials)
    numeric = max(numeric_trials)
    _check(checks, "f_numeric_dimension", numeric, 5, numeric == 5)

    violated = numeric < conj and numeric < min(bounds.values())
    report = {
        "counterexample": 2,
        "rank": rank,
        "sign_vector": signs,
        "independent": indep,
        "nested_bounds": bounds,
        "conjecture_value": conj,
        "numeric_dimension": numeric,
        "trials": numeric_trials,
        "verdict": "violated" if violated else "not violated",
        "checks": checks,
    }
    _check(checks, "verdict", report["verdict"], "violated", violated)
    return _finish(report, strict)
