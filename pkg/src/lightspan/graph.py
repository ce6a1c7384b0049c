"""Weighted undirected graphs, subgraphs, shortest paths and finite metrics.

Every structure here is immutable once built.  Edges carry a dense id in
input order and the strict total order used everywhere (MST, greedy scans)
is ``(weight, id)`` lexicographic, so the MST is unique and reproducible.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import (
    DisconnectedGraph,
    EmptySourceSet,
    IdenticalPoints,
    InvalidInput,
    InvalidVertex,
    NegativeWeight,
)

REL_TOL = 1e-9


def leq(a: float, b: float, tol: float = REL_TOL) -> bool:
    """``a <= b`` up to a relative tolerance (distances are float64 sums)."""
    return a <= b + tol * max(1.0, abs(b))


def mass_count(eps: float, n: int) -> int:
    """Number of points a ball must hold to have mass ``eps``: ceil(eps*n) in [1, n]."""
    return max(1, min(n, math.ceil(eps * n - 1e-9)))


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LIGHTSPAN_THREADS", "1")))
    except ValueError:
        return 1


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class WeightedEdge:
    u: int
    v: int
    weight: float
    id: int


class Graph:
    """Connected weighted undirected graph on vertices ``0..n-1``.

    Use :func:`build_graph` to construct one from raw input; the constructor
    assumes already validated, parallel-free arrays.
    """

    def __init__(self, n: int, u: Sequence[int], v: Sequence[int], w: Sequence[float]):
        self.n = int(n)
        self.u = np.asarray(u, dtype=np.int64)
        self.v = np.asarray(v, dtype=np.int64)
        self.w = np.asarray(w, dtype=np.float64)
        for arr in (self.u, self.v, self.w):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, weight={self.weight:g})"

    @property
    def m(self) -> int:
        return len(self.w)

    @property
    def weight(self) -> float:
        return float(self.w.sum())

    @cached_property
    def edges(self) -> tuple[WeightedEdge, ...]:
        return tuple(
            WeightedEdge(int(a), int(b), float(c), i)
            for i, (a, b, c) in enumerate(zip(self.u, self.v, self.w))
        )

    @cached_property
    def order(self) -> np.ndarray:
        """Edge ids sorted by the strict (weight, id) order."""
        return np.lexsort((np.arange(self.m), self.w))

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-vertex list of ``(neighbour, edge_id)``."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (a, b) in enumerate(zip(self.u.tolist(), self.v.tolist())):
            adj[a].append((b, i))
            adj[b].append((a, i))
        return adj

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        return {
            (min(a, b), max(a, b)): i
            for i, (a, b) in enumerate(zip(self.u.tolist(), self.v.tolist()))
        }

    def edge_id(self, a: int, b: int) -> int:
        return self.pair_index[(min(a, b), max(a, b))]

    def with_weights(self, w: Sequence[float]) -> Graph:
        """Same vertices, endpoints and edge ids, new weights."""
        return Graph(self.n, self.u, self.v, w)

    def full(self) -> Subgraph:
        return Subgraph(self, range(self.m))

    def csr(self, edge_ids: np.ndarray | None = None) -> csr_matrix:
        ids = np.arange(self.m) if edge_ids is None else edge_ids
        return csr_matrix(
            (self.w[ids], (self.u[ids], self.v[ids])), shape=(self.n, self.n)
        )

    @cached_property
    def _csr(self) -> csr_matrix:
        return self.csr()


class Subgraph:
    """An edge subset of a parent graph, measured with the parent's weights."""

    def __init__(self, parent: Graph, edge_ids: Iterable[int]):
        ids = frozenset(int(e) for e in edge_ids)
        if ids and (min(ids) < 0 or max(ids) >= parent.m):
            raise InvalidInput("edge id out of range for parent graph")
        self.parent = parent
        self.edge_ids = ids

    def __repr__(self) -> str:
        return f"Subgraph(n={self.n}, edges={len(self.edge_ids)}, weight={self.weight:g})"

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgraph):
            return NotImplemented
        return self.parent is other.parent and self.edge_ids == other.edge_ids

    def __hash__(self) -> int:
        return hash((id(self.parent), self.edge_ids))

    def __or__(self, other: Subgraph) -> Subgraph:
        if other.parent is not self.parent:
            raise InvalidInput("union of subgraphs of different graphs")
        return Subgraph(self.parent, self.edge_ids | other.edge_ids)

    def __le__(self, other: Subgraph) -> bool:
        return self.edge_ids <= other.edge_ids

    @property
    def n(self) -> int:
        return self.parent.n

    @cached_property
    def ids(self) -> np.ndarray:
        return np.array(sorted(self.edge_ids), dtype=np.int64)

    @property
    def weight(self) -> float:
        return float(self.parent.w[self.ids].sum())

    def on(self, parent: Graph) -> Subgraph:
        """The same edge ids viewed inside another graph with identical ids."""
        return Subgraph(parent, self.edge_ids)

    def edges(self) -> Iterator[WeightedEdge]:
        edges = self.parent.edges
        for i in self.ids.tolist():
            yield edges[i]

    @cached_property
    def _csr(self) -> csr_matrix:
        return self.parent.csr(self.ids)

    def is_connected(self) -> bool:
        dsu = _DSU(self.n)
        comps = self.n
        for i in self.ids.tolist():
            if dsu.union(int(self.parent.u[i]), int(self.parent.v[i])):
                comps -= 1
        return comps <= 1

    def is_spanning_tree(self) -> bool:
        return len(self.edge_ids) == self.n - 1 and self.is_connected()

    def as_graph(self) -> tuple[Graph, np.ndarray]:
        """Materialize as a standalone :class:`Graph`.

        Returns the graph and the array mapping its edge ids back to parent
        ids.  Ids are assigned in increasing parent-id order so the
        (weight, id) order is preserved.
        """
        if not self.is_connected():
            raise DisconnectedGraph("subgraph is not connected")
        ids = self.ids
        p = self.parent
        return Graph(self.n, p.u[ids], p.v[ids], p.w[ids]), ids


GraphLike = Union[Graph, Subgraph]


def _csr_of(h: GraphLike) -> csr_matrix:
    return h._csr


def _base(h: GraphLike) -> Graph:
    return h if isinstance(h, Graph) else h.parent


def build_graph(n: int, edges: Iterable[Sequence[float]]) -> Graph:
    """Validate raw ``(u, v, w)`` triples and build a connected :class:`Graph`.

    Parallel edges collapse to the lightest copy (earliest on ties); ids are
    then assigned densely in input order of the surviving edges.  Self-loops
    are dropped since they never affect distances or spanning trees.
    """
    n = int(n)
    if n < 1:
        raise InvalidInput("graph needs at least one vertex")
    best: dict[tuple[int, int], tuple[float, int]] = {}
    for pos, edge in enumerate(edges):
        a, b, w = int(edge[0]), int(edge[1]), float(edge[2])
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidVertex(f"edge ({a}, {b}) has an endpoint outside [0, {n})")
        if not math.isfinite(w) or w < 0:
            raise NegativeWeight(f"edge ({a}, {b}) has weight {w}; need finite w >= 0")
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key not in best or w < best[key][0]:
            best[key] = (w, pos if key not in best else best[key][1])
    kept = sorted(best.items(), key=lambda kv: kv[1][1])
    u = [k[0] for k, _ in kept]
    v = [k[1] for k, _ in kept]
    w = [val[0] for _, val in kept]
    g = Graph(n, u, v, w)
    if not g.full().is_connected():
        raise DisconnectedGraph(f"input graph on {n} vertices is not connected")
    return g


def mst(g: Graph) -> Subgraph:
    """Kruskal under the strict (weight, id) order."""
    dsu = _DSU(g.n)
    chosen = []
    us, vs = g.u.tolist(), g.v.tolist()
    for e in g.order.tolist():
        if dsu.union(us[e], vs[e]):
            chosen.append(e)
            if len(chosen) == g.n - 1:
                break
    return Subgraph(g, chosen)


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Multi-source shortest-path distances and predecessor edges.

    ``parent[v]`` is the id of the last edge on a shortest path from the
    source set to ``v`` (``-1`` at sources and at unreachable vertices).
    """

    sources: tuple[int, ...]
    dist: np.ndarray
    parent: np.ndarray
    graph: Graph

    def path_to(self, v: int) -> list[int]:
        """Edge ids of the shortest path from the source set to ``v``."""
        if not math.isfinite(self.dist[v]):
            raise DisconnectedGraph(f"vertex {v} is unreachable")
        path = []
        g = self.graph
        while self.parent[v] >= 0:
            e = int(self.parent[v])
            path.append(e)
            v = int(g.u[e]) if int(g.v[e]) == v else int(g.v[e])
        return path


def _edge_parents(g: Graph, pred: np.ndarray) -> np.ndarray:
    parent = np.full(len(pred), -1, dtype=np.int64)
    index = g.pair_index
    for x, p in enumerate(pred.tolist()):
        if p >= 0:
            parent[x] = index[(min(p, x), max(p, x))]
    return parent


def shortest_paths(h: GraphLike, sources: Iterable[int]) -> DistanceField:
    """Dijkstra from a vertex set; single-source is ``len(sources) == 1``."""
    src = tuple(sorted(set(int(s) for s in sources)))
    if not src:
        raise EmptySourceSet("shortest_paths needs at least one source")
    g = _base(h)
    if src[0] < 0 or src[-1] >= g.n:
        raise InvalidVertex("source outside the vertex range")
    dist, pred, _ = dijkstra(
        _csr_of(h), directed=False, indices=list(src), min_only=True, return_predecessors=True
    )
    return DistanceField(src, dist, _edge_parents(g, pred), g)


def distance_matrix(h: GraphLike, sources: Sequence[int] | None = None) -> np.ndarray:
    """Rows of shortest-path distances from ``sources`` (all vertices by default).

    The full matrix is symmetrized so ``D[u, v] == D[v, u]`` bit for bit.
    Source chunks run on up to ``LIGHTSPAN_THREADS`` workers.
    """
    csr = _csr_of(h)
    n = _base(h).n
    full = sources is None
    idx = np.arange(n) if full else np.asarray(sources, dtype=np.int64)
    workers = thread_count()
    if workers > 1 and len(idx) >= 2 * workers:
        chunks = np.array_split(idx, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: dijkstra(csr, directed=False, indices=c), chunks))
        D = np.vstack(parts)
    else:
        D = dijkstra(csr, directed=False, indices=idx)
    D = np.atleast_2d(D)
    if full:
        D = np.minimum(D, D.T)
    return D


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """Finite metric given by an explicit symmetric distance matrix.

    ``labels[i]`` names point ``i`` (e.g. the graph vertex it stands for).
    """

    dist: np.ndarray
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        D = np.asarray(self.dist, dtype=np.float64)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise InvalidInput("distance matrix must be square")
        D = np.minimum(D, D.T)
        D.setflags(write=False)
        object.__setattr__(self, "dist", D)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(D.shape[0])))

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @cached_property
    def sorted_rows(self) -> np.ndarray:
        return np.sort(self.dist, axis=1)

    def ball_size(self, v: int, r: float) -> int:
        """|B(v, r)| for the closed ball, center included."""
        return int(np.searchsorted(self.sorted_rows[v], r, side="right"))

    def radius(self, v: int, eps: float) -> float:
        return float(self.sorted_rows[v][mass_count(eps, self.n) - 1])

    def radii(self, eps: float) -> np.ndarray:
        return self.sorted_rows[:, mass_count(eps, self.n) - 1].copy()

    @cached_property
    def ball_counts(self) -> np.ndarray:
        """``C[v, u] = |B(v, d(v, u))|``."""
        S = self.sorted_rows
        C = np.empty((self.n, self.n), dtype=np.int64)
        for v in range(self.n):
            C[v] = np.searchsorted(S[v], self.dist[v], side="right")
        return C

    @classmethod
    def of_graph(cls, g: GraphLike) -> MetricSpace:
        return cls(distance_matrix(g))


class TerminalClosure(MetricSpace):
    """Metric closure over a terminal set, able to hand back host paths."""

    def __init__(self, dist: np.ndarray, labels: tuple[int, ...], pred: np.ndarray, graph: Graph):
        super().__init__(dist, labels)
        object.__setattr__(self, "pred", pred)
        object.__setattr__(self, "graph", graph)

    def path(self, a: int, b: int) -> list[int]:
        """Edge ids of the stored shortest path between terminals ``a`` and ``b``
        (indices into ``labels``), read from ``a``'s predecessor tree."""
        row = self.pred[a]
        g = self.graph
        x = self.labels[b]
        target = self.labels[a]
        path = []
        while x != target:
            p = int(row[x])
            if p < 0:
                raise DisconnectedGraph(f"no path between terminals {target} and {self.labels[b]}")
            path.append(g.edge_id(p, x))
            x = p
        return path


def metric_closure(g: GraphLike, K: Iterable[int]) -> TerminalClosure:
    """Complete metric over ``K`` weighted by host shortest-path distances."""
    terms = tuple(sorted(set(int(k) for k in K)))
    if not terms:
        raise EmptySourceSet("metric_closure needs a nonempty terminal set")
    D, pred = dijkstra(_csr_of(g), directed=False, indices=list(terms), return_predecessors=True)
    D = np.atleast_2d(D)
    pred = np.atleast_2d(pred)
    sub = D[:, list(terms)]
    return TerminalClosure(sub, terms, pred, _base(g))


def radius_R(m: MetricSpace, v: int, eps: float) -> float:
    """min{r : |B(v, r)| >= ceil(eps * n)}."""
    if not 0 < eps <= 1:
        raise InvalidInput(f"eps must lie in (0, 1], got {eps}")
    return m.radius(v, eps)


def farness_eps(m: MetricSpace, u: int, v: int) -> float:
    """Largest eps for which u and v are both eps/2-far from each other."""
    if u == v:
        raise IdenticalPoints("farness of a point with itself is undefined")
    d = m.dist[u, v]
    c = min(m.ball_size(u, d), m.ball_size(v, d))
    return min(1.0, 2.0 * c / m.n)


def farness_matrix(m: MetricSpace, one_sided: bool = False) -> np.ndarray:
    """Pairwise :func:`farness_eps` (``one_sided`` takes the max of the two ends)."""
    C = m.ball_counts
    pick = np.maximum if one_sided else np.minimum
    return np.minimum(1.0, 2.0 * pick(C, C.T) / m.n)
