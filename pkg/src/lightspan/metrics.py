"""Distortion measurement: pair tables, lightness, l_q norms, scaling,
coarse-scaling and prioritized profiles."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidInput, NotSpanning
from .graph import Graph, MetricSpace, Subgraph, distance_matrix, farness_matrix, mst
from .prioritized import PriorityRanking

MAX_EXACT_N = 2000


@dataclass(frozen=True, eq=False)
class DistortionProfile:
    """All C(n, 2) pairs ``u < v`` with base distance, embedded distance,
    distortion and the farness eps (both ends eps/2-far for eps <= eps_pair)."""

    n: int
    u: np.ndarray
    v: np.ndarray
    d_base: np.ndarray
    d_emb: np.ndarray
    distortion: np.ndarray
    eps_pair: np.ndarray
    eps_one: np.ndarray

    @property
    def pairs(self) -> int:
        return len(self.distortion)

    @cached_property
    def by_distortion(self) -> np.ndarray:
        """Distortions sorted in decreasing order."""
        return np.sort(self.distortion)[::-1]

    @cached_property
    def by_eps(self) -> np.ndarray:
        """Pair indices sorted by decreasing eps_pair."""
        return np.argsort(-self.eps_pair, kind="stable")

    def matrix(self) -> np.ndarray:
        M = np.ones((self.n, self.n))
        M[self.u, self.v] = self.distortion
        M[self.v, self.u] = self.distortion
        return M


def pair_distortions(base: np.ndarray, emb: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(base > 0, emb / base, np.where(emb > 0, np.inf, 1.0))


def profile_from_matrices(base: MetricSpace | np.ndarray, emb: np.ndarray) -> DistortionProfile:
    """Profile of an embedding given as a matrix of embedded distances."""
    m = base if isinstance(base, MetricSpace) else MetricSpace(base)
    emb = np.asarray(emb, dtype=np.float64)
    if emb.shape != m.dist.shape:
        raise InvalidInput("embedded distance matrix has the wrong shape")
    if not np.all(np.isfinite(emb)):
        raise NotSpanning("embedding leaves some pair at infinite distance")
    n = m.n
    iu, ju = np.triu_indices(n, k=1)
    db, de = m.dist[iu, ju], emb[iu, ju]
    return DistortionProfile(
        n, iu, ju, db, de, pair_distortions(db, de),
        farness_matrix(m)[iu, ju], farness_matrix(m, one_sided=True)[iu, ju],
    )


def measure(g: Graph, h: Subgraph) -> DistortionProfile:
    """Exact all-pairs distortion profile of ``h`` against ``g``."""
    if g.n > MAX_EXACT_N:
        raise InvalidInput(f"exact profiles are limited to n <= {MAX_EXACT_N}")
    if h.parent is not g and (h.parent.n != g.n or h.parent.m != g.m):
        raise NotSpanning("subgraph belongs to a different graph")
    if not h.is_connected():
        raise NotSpanning("subgraph does not span the graph")
    return profile_from_matrices(MetricSpace(distance_matrix(g)), distance_matrix(h))


def lightness(g: Graph, h: Subgraph) -> float:
    wT = mst(g).weight
    return h.weight / wT if wT > 0 else 1.0


def lq_distortion(p: DistortionProfile, q: float) -> float:
    if q == math.inf:
        return float(p.distortion.max()) if p.pairs else 1.0
    if q < 1:
        raise InvalidInput("q must be >= 1")
    if not p.pairs:
        return 1.0
    return float(np.mean(p.distortion**q) ** (1.0 / q))


class StepProfile:
    """Step function of eps in (0, 1]; evaluates pointwise or on arrays."""

    def __init__(self, fn, kind: str):
        self._fn = fn
        self.kind = kind

    def __call__(self, eps):
        if np.ndim(eps) == 0:
            return float(self._fn(float(eps)))
        return np.array([self._fn(float(e)) for e in eps])


def scaling_profile(p: DistortionProfile) -> StepProfile:
    """gamma(eps) = smallest value bounding all but floor(eps * N) pairs,
    i.e. the (floor(eps N) + 1)-th largest distortion."""
    s = p.by_distortion
    N = len(s)

    def gamma(eps: float) -> float:
        if N == 0:
            return 1.0
        k = math.floor(eps * N + 1e-9)
        return float(s[min(k, N - 1)])

    return StepProfile(gamma, "scaling")


def coarse_profile(p: DistortionProfile, one_sided: bool = False) -> StepProfile:
    """Max distortion over pairs whose ends are mutually eps/2-far (either
    end with ``one_sided``); 1 when no pair qualifies."""
    eps_col = p.eps_one if one_sided else p.eps_pair
    order = np.argsort(-eps_col, kind="stable")
    e_sorted = eps_col[order]
    run_max = np.maximum.accumulate(p.distortion[order]) if len(order) else np.array([])

    def gamma(eps: float) -> float:
        # pairs with eps_pair >= eps form a prefix of the decreasing order
        k = int(np.searchsorted(-e_sorted, -eps, side="right"))
        return float(run_max[k - 1]) if k else 1.0

    return StepProfile(gamma, "coarse")


def epsilon_grid(n: int) -> np.ndarray:
    """2^-1, 2^-2, ..., 2^-ceil(log2 C(n,2))."""
    N = n * (n - 1) // 2
    top = max(1, math.ceil(math.log2(N))) if N > 1 else 1
    return 2.0 ** -np.arange(1, top + 1)


@dataclass(frozen=True)
class PrioritizedProfile:
    """``alpha[j-1]`` is the worst distortion of pairs (v_j, v_i), i > j, for
    j = 1..n-1; ``envelope`` is its running max, the tightest monotone bound."""

    alpha: np.ndarray
    envelope: np.ndarray

    def env(self, j: int) -> float:
        if len(self.envelope) == 0:
            return 1.0
        return float(self.envelope[min(max(j, 1), len(self.envelope)) - 1])

    def env_table(self, n: int) -> np.ndarray:
        """Envelope for ranks 1..n (rank n repeats rank n-1)."""
        return np.array([self.env(j) for j in range(1, n + 1)])


def prioritized_profile(p: DistortionProfile, pi: PriorityRanking) -> PrioritizedProfile:
    n = p.n
    if len(pi) != n:
        raise InvalidInput("ranking size differs from the profile")
    order = np.array(pi.order)
    M = p.matrix()[np.ix_(order, order)]
    alpha = np.triu(M, k=1).max(axis=1)[: n - 1] if n > 1 else np.array([])
    return PrioritizedProfile(alpha, np.maximum.accumulate(alpha) if len(alpha) else alpha)


def lemma21_check(p: DistortionProfile, q: float) -> tuple[float, float, bool]:
    """Compare dist_q against (2 * integral of gamma^q over [1/(2N), 1])^(1/q).

    gamma is a step function constant on [k/N, (k+1)/N), so the integral is
    computed exactly: the first step contributes half a width.
    """
    if not 1 <= q < math.inf:
        raise InvalidInput("q must lie in [1, inf)")
    N = p.pairs
    lhs = lq_distortion(p, q)
    if N == 0:
        return lhs, lhs, True
    s = p.by_distortion ** q
    integral = (s[0] / 2 + s[1:].sum()) / N
    rhs = float((2 * integral) ** (1 / q))
    return lhs, rhs, lhs <= rhs * (1 + 1e-6)


def profile_table(p: DistortionProfile, grid: Sequence[float] | None = None) -> list[tuple[float, float, float]]:
    grid = epsilon_grid(p.n) if grid is None else grid
    gs, gc = scaling_profile(p), coarse_profile(p)
    return [(float(e), gs(e), gc(e)) for e in grid]


def write_profile_csv(path: str | Path, p: DistortionProfile) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["eps", "gamma", "gamma_coarse"])
        for e, a, b in profile_table(p):
            w.writerow([repr(e), repr(a), repr(b)])


def report_dict(g: Graph, h: Subgraph, p: DistortionProfile, profile_path: str | None = None,
                verdicts: dict | None = None) -> dict:
    return {
        "lightness": lightness(g, h),
        "dist_q": {"1": lq_distortion(p, 1), "2": lq_distortion(p, 2), "inf": lq_distortion(p, math.inf)},
        "profile": profile_path,
        "certification": verdicts or {},
    }


def write_report_json(path: str | Path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
