"""Concrete matroids: count matroids of graphs, linear matroids and their
representations (graphic, bicircular, partition), and the pebble game."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import InputError, VerificationFailure
from .field import DEFAULT_PRIME, ExactMatrix, as_rng, hstack, mat_rank
from .setfunc import SetFunction, bits, full_mask, popcount, to_mask


@dataclass(frozen=True)
class Graph:
    """Multigraph without self-loops on vertices ``0..n-1``."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputError(f"edge {i} = ({u}, {v}) has an endpoint out of range", field="edges")
            if u == v:
                raise InputError(f"edge {i} is a self-loop at {u}", field="edges")
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertex_span(self, F) -> set[int]:
        """``V(F)``: endpoints of the edges in ``F``."""
        out: set[int] = set()
        for e in bits(to_mask(F)):
            out.update(self.edges[e])
        return out

    def components(self, F=None) -> list[tuple[set[int], int]]:
        """Connected components of ``(V(F), F)`` as ``(vertices, edge_mask)``."""
        mask = full_mask(self.edge_count) if F is None else to_mask(F)
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in bits(mask):
            u, v = self.edges[e]
            parent[find(u)] = find(v)
        comps: dict[int, list] = {}
        for e in bits(mask):
            root = find(self.edges[e][0])
            entry = comps.setdefault(root, [set(), 0])
            entry[0].update(self.edges[e])
            entry[1] |= 1 << e
        return [(vs, em) for vs, em in comps.values()]

    def is_connected(self) -> bool:
        if self.vertex_count <= 1:
            return True
        comps = self.components()
        return len(comps) == 1 and len(comps[0][0]) == self.vertex_count


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


@dataclass(frozen=True)
class DPartiteHypergraph:
    """``d``-partite ``d``-uniform hypergraph; edge ``(j_1..j_d)`` meets vertex ``j_i`` of class ``i``."""

    class_sizes: tuple[int, ...]
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.class_sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise InputError("every vertex class needs at least one vertex", field="classes")
        edges = tuple(tuple(int(j) for j in e) for e in self.edges)
        for idx, e in enumerate(edges):
            if len(e) != len(sizes):
                raise InputError(f"edge {idx} has {len(e)} entries, expected {len(sizes)}", field="edges")
            for i, j in enumerate(e):
                if not 0 <= j < sizes[i]:
                    raise InputError(f"edge {idx} uses vertex {j} outside class {i}", field="edges")
        object.__setattr__(self, "class_sizes", sizes)
        object.__setattr__(self, "edges", edges)

    @property
    def d(self) -> int:
        return len(self.class_sizes)


# --------------------------------------------------------------------------
# count functions and the pebble game


class CountFunction(SetFunction):
    """``c_{k,l}(F) = k |V(F)| - l`` on the edges of a graph, ``c(empty) = 0``."""

    def __init__(self, graph: Graph, k: int, l: int):
        if k < 1 or l < 0:
            raise InputError(f"need k >= 1 and l >= 0, got ({k}, {l})", field="k,l")
        if 2 * k - l <= 0:
            raise InputError(f"need 2k - l > 0, got ({k}, {l})", field="k,l")
        self.graph = graph
        self.k = k
        self.l = l
        super().__init__(graph.edge_count, name=f"c_{k},{l}")
        self.monotone = self.submodular = True

    def _eval(self, mask):
        if mask == 0:
            return 0
        return self.k * len(self.graph.vertex_span(mask)) - self.l

    def fast_matroid_rank(self, mask):
        return pebble_game_rank(self, mask)


def count_eval(c: CountFunction, F) -> int:
    return c(F)


def _pebble_accept(n: int, edges, k: int, l: int, order) -> list[int]:
    pebbles = [k] * n
    out: list[list[int]] = [[] for _ in range(n)]

    def fetch(start, u, v):
        # depth-first search for a free pebble away from u and v; moves it to start
        parent = {start: None}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if y != u and y != v and pebbles[y] > 0:
                    pebbles[y] -= 1
                    pebbles[start] += 1
                    while parent[y] is not None:
                        z = parent[y]
                        out[z].remove(y)
                        out[y].append(z)
                        y = z
                    return True
                stack.append(y)
        return False

    accepted = []
    for e in order:
        u, v = edges[e]
        while pebbles[u] + pebbles[v] < l + 1:
            if not (fetch(u, u, v) or fetch(v, u, v)):
                break
        if pebbles[u] + pebbles[v] < l + 1:
            continue
        src, dst = (u, v) if pebbles[u] > 0 else (v, u)
        pebbles[src] -= 1
        out[src].append(dst)
        accepted.append(e)
    return accepted


def pebble_game_basis(c: CountFunction, F=None) -> list[int]:
    """Edges of ``F`` accepted by the ``(k, l)`` pebble game, in index order."""
    if not 0 <= c.l < 2 * c.k:
        raise InputError(f"pebble game needs 0 <= l < 2k, got ({c.k}, {c.l})", field="k,l")
    g = c.graph
    mask = full_mask(g.edge_count) if F is None else to_mask(F)
    return _pebble_accept(g.vertex_count, g.edges, c.k, c.l, bits(mask))


def pebble_game_rank(c: CountFunction, F=None) -> int:
    """Rank of ``F`` in the ``(k, l)``-count matroid."""
    return len(pebble_game_basis(c, F))


def count_matroid_rank(graph: Graph, k: int, l: int) -> SetFunction:
    """``c_{k,l}^MD`` as an oracle (answered by the pebble game)."""
    return CountFunction(graph, k, l).matroid_rank()


# --------------------------------------------------------------------------
# linear matroids


class LinearRank(SetFunction):
    """Rank of a subset of rows of a fixed matrix."""

    def __init__(self, matrix: ExactMatrix, name="rank"):
        self.matrix = matrix
        super().__init__(matrix.rows, name=name)
        self.monotone = self.submodular = True

    def _eval(self, mask):
        if mask == 0:
            return 0
        return mat_rank(self.matrix.row_subset(bits(mask)))

    def fast_matroid_rank(self, mask):
        return self(mask)


@dataclass(frozen=True)
class LinearMatroid:
    """Row matroid of ``rep``; element ``e`` is row ``e``."""

    rep: ExactMatrix

    @property
    def size(self) -> int:
        return self.rep.rows

    def rank(self, F=None) -> int:
        mask = full_mask(self.size) if F is None else to_mask(F)
        return mat_rank(self.rep.row_subset(bits(mask)))

    def rank_function(self) -> LinearRank:
        return LinearRank(self.rep)

    def is_independent(self, F) -> bool:
        return self.rank(F) == popcount(to_mask(F))


def _oriented_incidence(G: Graph, orientation, p: int) -> np.ndarray:
    a = np.zeros((G.edge_count, G.vertex_count), dtype=np.int64)
    orientation = orientation or [False] * G.edge_count
    if len(orientation) != G.edge_count:
        raise InputError("orientation needs one flag per edge", field="orientation")
    for e, (u, v) in enumerate(G.edges):
        tail, head = (v, u) if orientation[e] else (u, v)
        a[e, head] = 1
        a[e, tail] = p - 1
    return a


def graphic_representation(G: Graph, orientation=None, p: int = DEFAULT_PRIME) -> LinearMatroid:
    """Oriented incidence matrix: +1 at the head, -1 at the tail of each edge."""
    return LinearMatroid(ExactMatrix(_oriented_incidence(G, orientation, p), p))


def bicircular_representation(
    G: Graph,
    rng=0,
    p: int = DEFAULT_PRIME,
    full_check_edges: int = 10,
    samples: int = 200,
    retries: int = 5,
) -> LinearMatroid:
    """Two random nonzero entries per edge row, validated against the (1,0) pebble game.

    Every edge subset is checked when ``|E| <= full_check_edges``; otherwise
    ``samples`` random subsets plus the full edge set are checked.
    """
    rng = as_rng(rng)
    c10 = CountFunction(G, 1, 0)
    m = G.edge_count
    if m <= full_check_edges:
        subsets = list(range(1, 1 << m))
    else:
        subsets = [full_mask(m)] + [
            int(sum(1 << i for i in range(m) if rng.random() < q))
            for q in np.linspace(0.1, 0.9, samples)
        ]
    for _ in range(retries):
        a = np.zeros((m, G.vertex_count), dtype=np.int64)
        for e, (u, v) in enumerate(G.edges):
            a[e, u], a[e, v] = rng.integers(1, p, size=2)
        lm = LinearMatroid(ExactMatrix(a, p))
        if all(lm.rank(S) == pebble_game_rank(c10, S) for S in subsets):
            return lm
    raise VerificationFailure("bicircular", f"no generic representation after {retries} draws")


def partition_matroid_representation(H: DPartiteHypergraph, i: int, p: int = DEFAULT_PRIME) -> LinearMatroid:
    """0/1 matrix with entry ``(e, j) = 1`` iff edge ``e`` meets vertex ``j`` of class ``i`` (0-based)."""
    if not 0 <= i < H.d:
        raise InputError(f"class index {i} outside 0..{H.d - 1}", field="class_index")
    a = np.zeros((len(H.edges), H.class_sizes[i]), dtype=np.int64)
    for e, tup in enumerate(H.edges):
        a[e, tup[i]] = 1
    return LinearMatroid(ExactMatrix(a, p))


def hypergraph_incidence(H: DPartiteHypergraph, p: int = DEFAULT_PRIME) -> ExactMatrix:
    """Edge-vertex incidence matrix with the vertex classes laid out left to right."""
    if not H.edges:
        return ExactMatrix(np.zeros((0, sum(H.class_sizes)), dtype=np.int64), p)
    return hstack([partition_matroid_representation(H, i, p).rep for i in range(H.d)])
