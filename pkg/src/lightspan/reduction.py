"""Black-box lightness reduction: trade a 1/delta stretch factor for lightness 1 + delta*l."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import CertificationError, DeltaOutOfRange, NotTheMst
from .graph import REL_TOL, Graph, Subgraph, mst

Builder = Callable[[Graph], Subgraph]


@dataclass(frozen=True)
class SpannerBuilder:
    """A spanner construction plus its declared per-pair stretch ``t(u, v)``."""

    build: Builder
    stretch: Optional[Callable[[int, int], float]] = None
    name: str = "builder"

    def __call__(self, g: Graph) -> Subgraph:
        return self.build(g)


def _check_delta(delta: float) -> None:
    if not 0 < delta <= 1:
        raise DeltaOutOfRange(f"delta must lie in (0, 1], got {delta}")


def reweight(g: Graph, T: Subgraph, delta: float) -> Graph:
    """Scale every non-MST edge by 1/delta; MST edges keep their weight."""
    _check_delta(delta)
    if T.parent is not g or T.edge_ids != mst(g).edge_ids:
        raise NotTheMst("reweight needs the MST of the given graph")
    w = g.w / delta
    w[T.ids] = g.w[T.ids]
    return g.with_weights(w)


@dataclass(frozen=True, eq=False)
class ReductionReport:
    spanner: Subgraph
    mst: Subgraph
    reweighted: Graph
    base: Subgraph
    delta: float
    base_lightness: float

    @property
    def lightness_bound(self) -> float:
        return 1.0 + self.delta * self.base_lightness

    @property
    def extra_weight(self) -> float:
        """delta * w'(E_base minus T), which equals w(H) - w(T)."""
        extra = np.array(sorted(self.base.edge_ids - self.mst.edge_ids), dtype=np.int64)
        return self.delta * float(self.reweighted.w[extra].sum())


def reduce_detailed(builder: Union[Builder, SpannerBuilder], g: Graph, delta: float) -> ReductionReport:
    _check_delta(delta)
    T = mst(g)
    gp = reweight(g, T, delta)
    base = builder(gp)
    if base.parent is not gp:
        base = base.on(gp)
    Tp = T.on(gp)
    ell = base.weight / Tp.weight if Tp.weight > 0 else 1.0
    H = base.on(g) | T
    report = ReductionReport(H, T, gp, base, delta, ell)
    wT = T.weight
    ledger = H.weight - wT
    if abs(ledger - report.extra_weight) > REL_TOL * max(1.0, H.weight):
        raise CertificationError(
            "weight-ledger", f"w(H)-w(T)={ledger} but delta*w'(base minus T)={report.extra_weight}"
        )
    if H.weight > report.lightness_bound * wT * (1 + REL_TOL) + REL_TOL:
        raise CertificationError(
            "lightness", f"w(H)={H.weight} exceeds (1+delta*l)*w(T)={report.lightness_bound * wT}"
        )
    return report


def reduce(builder: Union[Builder, SpannerBuilder], g: Graph, delta: float) -> Subgraph:
    """``builder(reweight(g))`` plus the MST, read back with the original weights.

    Lightness is at most ``1 + delta * l`` for the builder's measured
    lightness ``l`` on the reweighted graph, and every pair's stretch grows
    by at most a factor ``1/delta``.
    """
    return reduce_detailed(builder, g, delta).spanner
