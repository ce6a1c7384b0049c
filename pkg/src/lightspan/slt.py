"""Shallow-light trees rooted at a vertex set."""

from __future__ import annotations

from typing import Iterable

from .errors import AlphaOutOfRange, EmptySourceSet
from .graph import Graph, Subgraph, mst, shortest_paths


def euler_tour(tree: Subgraph, root: int) -> list[tuple[int, float]]:
    """Closed DFS walk over a spanning tree as ``(vertex, weight_of_step)`` pairs.

    Children are visited in increasing vertex id; every tree edge is walked
    twice, so the step weights sum to twice the tree weight.
    """
    g = tree.parent
    children: list[list[tuple[int, float]]] = [[] for _ in range(g.n)]
    for e in tree.edges():
        children[e.u].append((e.v, e.weight))
        children[e.v].append((e.u, e.weight))
    for c in children:
        c.sort()
    walk = [(root, 0.0)]
    seen = [False] * g.n
    seen[root] = True
    stack = [(root, iter(children[root]), 0.0)]
    while stack:
        x, it, back = stack[-1]
        for y, w in it:
            if not seen[y]:
                seen[y] = True
                walk.append((y, w))
                stack.append((y, iter(children[y]), w))
                break
        else:
            stack.pop()
            if stack:
                walk.append((stack[-1][0], back))
    return walk


def slt(g: Graph, K: Iterable[int], alpha: float) -> Subgraph:
    """Subgraph containing the MST with d_S(u, K) <= alpha * d_G(u, K) for all u
    and weight at most (1 + 2/(alpha - 1)) times the MST.

    The MST is walked in DFS order while an accumulator tracks the length of
    a known path from K to the current vertex.  Whenever that exceeds
    ``alpha * d_G(u, K)`` the shortest path from K to ``u`` is grafted in and
    the accumulator drops to ``d_G(u, K)``.
    """
    if not alpha > 1:
        raise AlphaOutOfRange(f"alpha must exceed 1, got {alpha}")
    terms = sorted(set(int(k) for k in K))
    if not terms:
        raise EmptySourceSet("slt needs a nonempty root set")
    tree = mst(g)
    field = shortest_paths(g, terms)
    dist = field.dist
    best = [float("inf")] * g.n
    for k in terms:
        best[k] = 0.0
    grafted: set[int] = set()
    cur = 0.0
    for x, step in euler_tour(tree, terms[0]):
        cur = min(cur + step, best[x])
        if cur > alpha * dist[x]:
            path = field.path_to(x)
            grafted.update(path)
            y = x
            for e in path:
                best[y] = min(best[y], float(dist[y]))
                y = int(g.u[e]) if int(g.v[e]) == y else int(g.v[e])
            cur = float(dist[x])
        best[x] = min(best[x], cur)
    return Subgraph(g, tree.edge_ids | grafted)
