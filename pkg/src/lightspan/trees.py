"""Spanning trees of light spanners and composition of scaling profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DisconnectedGraph, InvalidInput, NotATree
from .graph import Graph, MetricSpace, Subgraph, distance_matrix, mst, shortest_paths
from .metrics import (
    DistortionProfile,
    StepProfile,
    epsilon_grid,
    lightness,
    lq_distortion,
    profile_from_matrices,
    scaling_profile,
)
from .prioritized import PriorityRanking, prioritized_spanner_detailed
from .scaling import canonical_ranking
from .slt import slt

STRATEGIES = ("mst-of-spanner", "last-median", "plugin")
LAST_ALPHA = 3.0


@dataclass(frozen=True)
class TreeStrategy:
    name: str = "mst-of-spanner"
    alpha: float = LAST_ALPHA
    edges: Optional[tuple[tuple[int, int, float], ...]] = None

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise InvalidInput(f"unknown tree strategy {self.name!r}; choose from {STRATEGIES}")
        if self.name == "plugin" and self.edges is None:
            raise InvalidInput("plugin strategy needs an edge list")


def _as_strategy(s: Union[str, TreeStrategy]) -> TreeStrategy:
    return s if isinstance(s, TreeStrategy) else TreeStrategy(s)


def median_vertex(h: Subgraph) -> int:
    """Vertex minimizing the sum of distances in ``h`` (lowest id on ties)."""
    return int(np.argmin(distance_matrix(h).sum(axis=1)))


def _plugin_tree(h: Subgraph, edges: Iterable[Sequence[float]]) -> Subgraph:
    g = h.parent
    ids = []
    for e in edges:
        a, b, w = int(e[0]), int(e[1]), float(e[2])
        try:
            eid = g.edge_id(a, b)
        except KeyError:
            raise NotATree(f"({a}, {b}) is not an edge of the graph") from None
        if eid not in h.edge_ids:
            raise NotATree(f"({a}, {b}) is not an edge of the spanner")
        if not math.isclose(w, float(g.w[eid]), rel_tol=1e-9, abs_tol=1e-12):
            raise NotATree(f"({a}, {b}) has weight {w}, expected {g.w[eid]}")
        ids.append(eid)
    T = Subgraph(g, ids)
    if len(ids) != g.n - 1 or not T.is_spanning_tree():
        raise NotATree(f"plugin edge list is not a spanning tree on {g.n} vertices")
    return T


def spanning_tree(h: Subgraph, strategy: Union[str, TreeStrategy] = "mst-of-spanner") -> Subgraph:
    """Spanning tree of ``h`` (as a subgraph of ``h.parent``).

    ``mst-of-spanner`` takes the MST of h under the global edge order;
    ``last-median`` roots a shallow-light tree (stretch ``alpha`` from the
    root) at the distance median and keeps its shortest-path tree;
    ``plugin`` validates an externally supplied tree.
    """
    strategy = _as_strategy(strategy)
    if not h.is_connected():
        raise DisconnectedGraph("spanning_tree needs a connected subgraph")
    if strategy.name == "plugin":
        return _plugin_tree(h, strategy.edges)
    hg, back = h.as_graph()
    if strategy.name == "mst-of-spanner":
        local = mst(hg)
    else:
        root = median_vertex(h)
        S = slt(hg, [root], strategy.alpha)
        field_ = shortest_paths(S, [root])
        local = Subgraph(hg, [int(e) for e in field_.parent if e >= 0])
    return Subgraph(h.parent, back[local.ids])


def compose_profiles(alpha: Callable[[float], float], beta: Callable[[float], float]) -> StepProfile:
    """Scaling profile of a composition: eps -> alpha(eps/2) * beta(eps/2)."""
    return StepProfile(lambda eps: alpha(eps / 2) * beta(eps / 2), "composed")


def composition_violations(first: DistortionProfile, second: DistortionProfile,
                           grid: Sequence[float] | None = None) -> list[tuple[float, int, float]]:
    """Per grid eps: (eps, #pairs whose composed distortion exceeds
    alpha(eps/2) * beta(eps/2), eps * C(n, 2)).

    Both profiles must list the same pairs in the same order (as produced by
    :func:`profile_from_matrices` over the same point set).
    """
    grid = epsilon_grid(first.n) if grid is None else grid
    a, b = scaling_profile(first), scaling_profile(second)
    composed = first.distortion * second.distortion
    N = first.pairs
    out = []
    for eps in grid:
        bound = a(eps / 2) * b(eps / 2)
        count = int(np.count_nonzero(composed > bound * (1 + 1e-9)))
        out.append((float(eps), count, float(eps) * N))
    return out


@dataclass(frozen=True, eq=False)
class LightTreeReport:
    tree: Subgraph
    spanner: Subgraph
    ranking: PriorityRanking
    rho: float
    strategy: str
    lightness_tree: float
    lightness_spanner: float
    profile_tree: Optional[DistortionProfile] = None
    profile_spanner: Optional[DistortionProfile] = None
    profile_stage2: Optional[DistortionProfile] = None
    grid: np.ndarray = field(default_factory=lambda: np.array([]))

    @property
    def dist1(self) -> float:
        return lq_distortion(self.profile_tree, 1)

    def scaling_table(self) -> list[dict]:
        """Measured tree profile, the composed bound and gamma * sqrt(eps) per grid eps."""
        gt = scaling_profile(self.profile_tree)
        bound = compose_profiles(scaling_profile(self.profile_spanner), scaling_profile(self.profile_stage2))
        return [
            {"eps": float(e), "gamma": gt(e), "composed_bound": bound(e),
             "gamma_sqrt_eps": gt(e) * math.sqrt(e)}
            for e in self.grid
        ]

    def summary(self) -> dict:
        return {
            "rho": self.rho,
            "strategy": self.strategy,
            "lightness_tree": self.lightness_tree,
            "lightness_spanner": self.lightness_spanner,
            "dist1": self.dist1 if self.profile_tree is not None else None,
            "scaling": self.scaling_table() if self.profile_tree is not None else [],
        }


def light_tree(
    g: Graph,
    pi: Union[PriorityRanking, str] = "canonical",
    rho: float = 0.5,
    strategy: Union[str, TreeStrategy] = "mst-of-spanner",
    measure: bool = True,
) -> tuple[Subgraph, LightTreeReport]:
    """Spanning tree with lightness at most 1 + rho built from the prioritized
    spanner under the canonical ranking of g's metric.

    With ``measure`` the report carries exact profiles of H against g, T
    against H and T against g.
    """
    if not 0 < rho < 1:
        raise InvalidInput(f"rho must lie in (0, 1), got {rho}")
    DG = distance_matrix(g)
    mg = MetricSpace(DG)
    if isinstance(pi, str):
        if pi == "canonical":
            pi = canonical_ranking(mg)
        elif pi == "identity":
            pi = PriorityRanking.identity(g.n)
        else:
            raise InvalidInput(f"unknown ranking {pi!r}")
    H = prioritized_spanner_detailed(g, pi, rho, verify=False).spanner
    strat = _as_strategy(strategy)
    T = spanning_tree(H, strat)
    lt, lh = lightness(g, T), lightness(g, H)
    if not (lt <= lh * (1 + 1e-12) and lh <= 1 + rho + 1e-9):
        raise InvalidInput(f"lightness chain broken: tree {lt}, spanner {lh}, rho {rho}")
    report = LightTreeReport(T, H, pi, rho, strat.name, lt, lh)
    if measure:
        DH, DT = distance_matrix(H), distance_matrix(T)
        report = LightTreeReport(
            T, H, pi, rho, strat.name, lt, lh,
            profile_tree=profile_from_matrices(mg, DT),
            profile_spanner=profile_from_matrices(mg, DH),
            profile_stage2=profile_from_matrices(MetricSpace(DH), DT),
            grid=epsilon_grid(g.n),
        )
    return T, report
