"""Terminal spanners and light spanners with prioritized distortion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CertificationError, InvalidInput
from .graph import Graph, Subgraph, distance_matrix, leq, mst
from .greedy import backbone_t, terminal_backbone
from .reduction import ReductionReport, SpannerBuilder, reduce_detailed
from .slt import slt

SLT_ALPHA = 2.0
# a priori lightness of the base builder used for the first pass: the SLT bound 1 + 2/(alpha-1)
INITIAL_BASE_LIGHTNESS = 1.0 + 2.0 / (SLT_ALPHA - 1.0)
MAX_RESCALES = 40
REFINE_STEPS = 4


class PriorityRanking:
    """Permutation ``v_1, ..., v_n``; ``order[j-1]`` holds ``v_j``."""

    def __init__(self, order: Iterable[int]):
        order = tuple(int(v) for v in order)
        if sorted(order) != list(range(len(order))):
            raise InvalidInput("ranking must be a permutation of 0..n-1")
        self.order = order
        rank = [0] * len(order)
        for j, v in enumerate(order, start=1):
            rank[v] = j
        self._rank = tuple(rank)

    @classmethod
    def identity(cls, n: int) -> PriorityRanking:
        return cls(range(n))

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PriorityRanking) and self.order == other.order

    def __hash__(self) -> int:
        return hash(self.order)

    def __repr__(self) -> str:
        head = ", ".join(map(str, self.order[:8]))
        return f"PriorityRanking([{head}{', ...' if len(self) > 8 else ''}])"

    def rank(self, v: int) -> int:
        """1-based rank of vertex ``v``."""
        return self._rank[v]

    @property
    def ranks(self) -> np.ndarray:
        return np.array(self._rank, dtype=np.int64)

    def prefix(self, j: int) -> tuple[int, ...]:
        return self.order[:j]


def terminal_distortion_bound(k: int, delta: float) -> float:
    """Certified K x V stretch of :func:`terminal_spanner`.

    Backbone stretch s = 2t-1 between terminals, SLT stretch 2 to the set:
    d(v,u) <= s * 3 d(v,u) + 2 d(v,u), then the 1/delta of the reduction.
    """
    s = 2 * backbone_t(k) - 1
    return (3 * s + 2) / delta


def terminal_base(K: Sequence[int]) -> SpannerBuilder:
    terms = tuple(sorted(set(int(k) for k in K)))

    def build(gp: Graph) -> Subgraph:
        return terminal_backbone(gp, terms) | slt(gp, terms, SLT_ALPHA) | mst(gp)

    return SpannerBuilder(build, name=f"terminal-base(k={len(terms)})")


def _check_terminal_distortion(g: Graph, h: Subgraph, K: Sequence[int], bound: float) -> None:
    terms = sorted(set(K))
    DG = distance_matrix(g, terms)
    DH = distance_matrix(h, terms)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(DG > 0, DH / DG, np.where(DH > 0, np.inf, 1.0))
    i, v = np.unravel_index(np.argmax(ratio), ratio.shape)
    if not leq(float(ratio[i, v]), bound):
        raise CertificationError(
            "terminal-distortion",
            f"pair ({terms[i]}, {v}) has distortion {ratio[i, v]} > {bound}",
            (int(terms[i]), int(v)),
        )


def terminal_spanner_detailed(
    g: Graph, K: Iterable[int], delta: float, verify: bool = False
) -> ReductionReport:
    terms = tuple(sorted(set(int(k) for k in K)))
    if not terms:
        raise InvalidInput("terminal set must be nonempty")
    report = reduce_detailed(terminal_base(terms), g, delta)
    if verify:
        _check_terminal_distortion(g, report.spanner, terms, terminal_distortion_bound(len(terms), delta))
    return report


def terminal_spanner(g: Graph, K: Iterable[int], delta: float, verify: bool = True) -> Subgraph:
    """Spanner containing the MST with lightness at most 1 + delta * l_base in
    which every pair in K x V has stretch at most
    :func:`terminal_distortion_bound` ``(|K|, delta)``."""
    return terminal_spanner_detailed(g, K, delta, verify).spanner


@dataclass(frozen=True)
class Level:
    index: int
    terminals: tuple[int, ...]
    delta: float


@dataclass(frozen=True)
class LevelSchedule:
    levels: tuple[Level, ...]

    def level_of_rank(self, j: int) -> int:
        """Position (0-based) of the first level whose terminal set holds rank ``j``."""
        for pos, lvl in enumerate(self.levels):
            if j <= len(lvl.terminals):
                return pos
        raise InvalidInput(f"rank {j} exceeds the schedule")


def level_count(n: int) -> int:
    if n <= 4:
        return 1
    return math.ceil(math.log2(math.log2(n)))


def level_sizes(n: int) -> list[int]:
    L = level_count(n)
    if L == 1:
        return [n]
    sizes = [min(n, 2 ** (2**i)) for i in range(1, L + 1)]
    sizes[-1] = n
    return sizes


def schedule(pi: PriorityRanking, rho: float, scale: float = 1.0,
             base_lightness: float = INITIAL_BASE_LIGHTNESS) -> LevelSchedule:
    """Nested terminal sets K_i = {v_j : j <= 2^(2^i)} with
    delta_i = scale * rho / (Z * i^2 * base_lightness), Z = sum 1/i^2 over the levels."""
    sizes = level_sizes(len(pi))
    Z = sum(1.0 / i**2 for i in range(1, len(sizes) + 1))
    levels = []
    for i, size in enumerate(sizes, start=1):
        delta = min(1.0, scale * rho / (Z * i * i * base_lightness))
        levels.append(Level(i, pi.prefix(size), delta))
    return LevelSchedule(tuple(levels))


def priority_weight(j: int) -> float:
    """log(j+2) * loglog(j+4)^2, the rank profile the certified bound is quoted against."""
    return math.log2(j + 2) * math.log2(math.log2(j + 4)) ** 2


@dataclass(frozen=True, eq=False)
class PrioritizedReport:
    spanner: Subgraph
    ranking: PriorityRanking
    rho: float
    schedule: LevelSchedule
    level_reports: tuple[ReductionReport, ...]
    rescales: int
    lightness: float
    level_bounds: tuple[float, ...] = field(default=())

    def bound(self, j: int) -> float:
        """Certified stretch for every pair whose better-ranked end has rank ``j``."""
        return self.level_bounds[self.schedule.level_of_rank(min(j, len(self.ranking)))]

    def bounds(self) -> np.ndarray:
        """Certified bound for ranks 1..n (index 0 is rank 1)."""
        return np.array([self.bound(j) for j in range(1, len(self.ranking) + 1)])

    @property
    def constant(self) -> float:
        """Smallest C with bound(j) <= C * priority_weight(j) / rho for every rank."""
        n = len(self.ranking)
        return max(self.bound(j) * self.rho / priority_weight(j) for j in range(1, n + 1))


def _build_levels(g: Graph, sched: LevelSchedule) -> list[ReductionReport]:
    return [terminal_spanner_detailed(g, lvl.terminals, lvl.delta) for lvl in sched.levels]


def _assemble(g: Graph, T: Subgraph, pi: PriorityRanking, rho: float, scale: float):
    sched = schedule(pi, rho, scale)
    reports = _build_levels(g, sched)
    H = T
    for r in reports:
        if r.mst.edge_ids != T.edge_ids:
            raise CertificationError("mst-sharing", "level spanner built on a different MST")
        H = H | r.spanner
    wT = T.weight
    excess = H.weight / wT - 1.0 if wT > 0 else 0.0
    return sched, reports, H, excess, H.weight <= (1 + rho) * wT


def prioritized_spanner_detailed(
    g: Graph, pi: PriorityRanking, rho: float, verify: bool = True, refine: bool = True
) -> PrioritizedReport:
    """Build the level spanners and pick one global scale for all delta_i.

    The first pass uses the a priori base lightness.  While the union is too
    heavy the scale shrinks; with ``refine`` it also grows (doubling, then a
    few bisection steps) while the measured lightness stays within 1 + rho.
    Only scales whose measured union satisfies the budget are ever kept.
    """
    if not 0 < rho < 1:
        raise InvalidInput(f"rho must lie in (0, 1), got {rho}")
    if len(pi) != g.n:
        raise InvalidInput("ranking size differs from the vertex count")
    T = mst(g)
    wT = T.weight
    scale, rescales = 1.0, 0
    built = _assemble(g, T, pi, rho, scale)
    while not built[4]:
        if rescales >= MAX_RESCALES:
            raise CertificationError("lightness", f"could not reach lightness 1+{rho} (excess {built[3]})")
        # slack absorbs the nonlinearity of the union weight in delta
        scale *= 0.9 * rho / max(built[3], rho)
        rescales += 1
        built = _assemble(g, T, pi, rho, scale)
    good, good_scale, bad_scale = built, scale, None
    if refine:
        max_scale = good_scale / good[0].levels[-1].delta
        while bad_scale is None and good_scale < max_scale:
            trial = min(2 * good_scale, max_scale)
            built = _assemble(g, T, pi, rho, trial)
            rescales += 1
            if built[4]:
                good, good_scale = built, trial
            else:
                bad_scale = trial
        for _ in range(REFINE_STEPS if bad_scale is not None else 0):
            trial = math.sqrt(good_scale * bad_scale)
            built = _assemble(g, T, pi, rho, trial)
            rescales += 1
            if built[4]:
                good, good_scale = built, trial
            else:
                bad_scale = trial
    sched, reports, H, _, _ = good
    bounds = tuple(
        terminal_distortion_bound(len(lvl.terminals), lvl.delta) for lvl in sched.levels
    )
    report = PrioritizedReport(H, pi, rho, sched, tuple(reports), rescales,
                               H.weight / wT if wT > 0 else 1.0, bounds)
    if verify:
        certify_prioritized(g, report)
    return report


def prioritized_spanner(g: Graph, pi: PriorityRanking, rho: float, verify: bool = True) -> Subgraph:
    """Spanner with lightness at most 1 + rho whose stretch on a pair (v_j, v_i),
    j < i, is bounded by a function of j growing like log j * loglog^2 j / rho."""
    return prioritized_spanner_detailed(g, pi, rho, verify).spanner


def certify_prioritized(g: Graph, report: PrioritizedReport) -> None:
    """All-pairs check of every per-rank bound; raises on the first violation."""
    H = report.spanner
    pi = report.ranking
    DG = distance_matrix(g)
    DH = distance_matrix(H)
    order = np.array(pi.order)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(DG > 0, DH / DG, np.where(DH > 0, np.inf, 1.0))
    ratio = ratio[np.ix_(order, order)]
    bounds = report.bounds()
    # row j-1 of the permuted matrix is v_j; pairs with i > j bound by bound(j)
    upper = np.triu(ratio, k=1)
    worst_per_rank = upper.max(axis=1) if len(order) > 1 else np.zeros(1)
    tol = 1 + 1e-9
    bad = np.nonzero(worst_per_rank > bounds * tol)[0]
    if len(bad):
        j = int(bad[0])
        i = int(np.argmax(upper[j]))
        raise CertificationError(
            "prioritized-distortion",
            f"pair (v_{j + 1}, v_{i + 1}) has distortion {upper[j, i]} > {bounds[j]}",
            (int(order[j]), int(order[i])),
        )
    if not H.weight <= (1 + report.rho) * mst(g).weight:
        raise CertificationError("lightness", f"lightness {report.lightness} > 1+{report.rho}")
