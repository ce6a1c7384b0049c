"""Greedy (2t-1)-spanner and the terminal backbone built on top of it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union, overload

import numpy as np

from .errors import InvalidInput
from .graph import Graph, MetricSpace, Subgraph, metric_closure


@dataclass(frozen=True)
class SpannerParams:
    t: int

    def __post_init__(self):
        if int(self.t) != self.t or self.t < 1:
            raise InvalidInput(f"stretch parameter t must be an integer >= 1, got {self.t}")

    @property
    def stretch(self) -> int:
        return 2 * self.t - 1


def greedy_select(n: int, us: np.ndarray, vs: np.ndarray, ws: np.ndarray, stretch: float) -> list[int]:
    """Indices of the edges kept by the greedy scan.

    Edges must already be listed in scan order.  An edge is kept iff the
    current spanner distance between its endpoints exceeds ``stretch * w``.
    The spanner's all-pairs matrix is maintained incrementally, so each
    query is O(1) and each accepted edge costs O(n^2).
    """
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    kept = []
    for i, (a, b, w) in enumerate(zip(us.tolist(), vs.tolist(), ws.tolist())):
        if D[a, b] > stretch * w:
            kept.append(i)
            via = D[:, a][:, None] + w + D[b, :][None, :]
            np.minimum(D, via, out=D)
            np.minimum(D, via.T, out=D)
    return kept


@overload
def greedy_spanner(m: Graph, t: int) -> Subgraph: ...
@overload
def greedy_spanner(m: MetricSpace, t: int) -> list[tuple[int, int]]: ...


def greedy_spanner(m: Union[Graph, MetricSpace], t: int):
    """Classical greedy spanner with stretch ``2t - 1``.

    For a :class:`Graph` the scan follows the (weight, id) order and a
    :class:`Subgraph` is returned.  For a :class:`MetricSpace` the complete
    graph is scanned with pairs ``(i, j), i < j`` ordered by
    ``(distance, i, j)`` and the selected pairs are returned.
    """
    stretch = SpannerParams(t).stretch
    if isinstance(m, Graph):
        order = m.order
        kept = greedy_select(m.n, m.u[order], m.v[order], m.w[order], stretch)
        return Subgraph(m, order[kept])
    n = m.n
    iu, ju = np.triu_indices(n, k=1)
    ws = m.dist[iu, ju]
    order = np.lexsort((ju, iu, ws))
    kept = greedy_select(n, iu[order], ju[order], ws[order], stretch)
    return [(int(iu[order[k]]), int(ju[order[k]])) for k in kept]


def backbone_t(k: int) -> int:
    """Stretch parameter giving O(log k) distortion: ceil(log2 max(k, 2)) + 1."""
    return math.ceil(math.log2(max(k, 2))) + 1


def terminal_backbone(g: Graph, K: Iterable[int]) -> Subgraph:
    """Union of host shortest paths realizing a greedy spanner of the closure on K.

    Every pair of terminals ends up with distortion at most
    ``2 * backbone_t(|K|) - 1``.
    """
    closure = metric_closure(g, K)
    k = closure.n
    if k == 1:
        return Subgraph(g, ())
    pairs = greedy_spanner(closure, backbone_t(k))
    ids: set[int] = set()
    for a, b in pairs:
        ids.update(closure.path(a, b))
    return Subgraph(g, ids)
