"""Density nets and the two-way translation between prioritized and coarse
scaling distortion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import polygamma

from .errors import (
    CertificationError,
    ContractiveEmbedding,
    DegenerateMetric,
    InvalidInput,
    RankingMismatch,
)
from .graph import REL_TOL, MetricSpace, farness_matrix
from .prioritized import PriorityRanking


@dataclass(frozen=True)
class DensityNet:
    eps: float
    points: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)


def density_net(m: MetricSpace, eps: float) -> DensityNet:
    """Greedy eps-density net.

    Points are scanned by increasing R(v, eps) (ties by id) and kept when
    farther than 2R(v, eps) from every point kept so far.  The balls
    B(v, R(v, eps)) of kept points are then pairwise disjoint, which caps
    the net at 1/eps points.
    """
    if not 0 < eps <= 1:
        raise InvalidInput(f"eps must lie in (0, 1], got {eps}")
    R = m.radii(eps)
    order = np.lexsort((np.arange(m.n), R))
    D = m.dist
    nearest = np.full(m.n, np.inf)
    chosen = []
    for v in order.tolist():
        if nearest[v] > 2 * R[v]:
            chosen.append(v)
            np.minimum(nearest, D[v], out=nearest)
    net = DensityNet(eps, tuple(chosen))
    check_density_net(m, net)
    return net


def check_density_net(m: MetricSpace, net: DensityNet) -> None:
    """Assert size, coverage and the disjoint-balls witness."""
    eps = net.eps
    if len(net) > math.floor(1 / eps + 1e-9):
        raise CertificationError("net-size", f"{len(net)} points > 1/eps = {1 / eps}")
    R = m.radii(eps)
    pts = list(net.points)
    cover = m.dist[:, pts].min(axis=1)
    bad = np.nonzero(cover > 2 * R * (1 + REL_TOL) + 1e-12)[0]
    if len(bad):
        v = int(bad[0])
        raise CertificationError("net-coverage", f"d({v}, N)={cover[v]} > 2R={2 * R[v]}", v)
    # closed balls B(a, R_a), B(b, R_b) are disjoint in a metric when d(a, b) > R_a + R_b
    sub = m.dist[np.ix_(pts, pts)]
    r = R[pts]
    clash = (sub <= r[:, None] + r[None, :]) & ~np.eye(len(pts), dtype=bool)
    for i, j in np.argwhere(np.triu(clash)).tolist():
        # fall back to an explicit intersection test before failing
        if ((m.dist[pts[i]] <= r[i]) & (m.dist[pts[j]] <= r[j])).any():
            raise CertificationError("net-disjoint", f"balls of {pts[i]} and {pts[j]} intersect",
                                     (pts[i], pts[j]))


def net_levels(n: int) -> int:
    return math.ceil(math.log2(n)) if n > 1 else 0


def canonical_nets(m: MetricSpace) -> list[DensityNet]:
    return [density_net(m, 2.0**-i) for i in range(1, net_levels(m.n) + 1)]


def canonical_ranking(m: MetricSpace) -> PriorityRanking:
    """Ranking in which every point of the 2^-i net comes before anything
    first appearing in a later net, so its rank is below 2^(i+1)."""
    nets = canonical_nets(m)
    placed: list[int] = []
    seen: set[int] = set()
    for net in nets:
        tier = sorted(set(net.points) - seen)
        placed.extend(tier)
        seen.update(tier)
    placed.extend(v for v in range(m.n) if v not in seen)
    pi = PriorityRanking(placed)
    for i, net in enumerate(nets, start=1):
        for v in net.points:
            if pi.rank(v) >= 2 ** (i + 1):
                raise CertificationError("rank-bound", f"net {i} point {v} has rank {pi.rank(v)}", v)
    return pi


def interleave(pi_user: PriorityRanking, pi_canonical: PriorityRanking) -> PriorityRanking:
    """Alternate the two rankings (user first), skipping points already placed.

    Every point's rank is at most twice its rank in either input.
    """
    if len(pi_user) != len(pi_canonical):
        raise InvalidInput("rankings differ in size")
    out, seen = [], set()
    for a, b in zip(pi_user.order, pi_canonical.order):
        for v in (a, b):
            if v not in seen:
                seen.add(v)
                out.append(v)
    return PriorityRanking(out)


def _ratio(base: np.ndarray, emb: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(base > 0, emb / base, np.where(emb > 0, np.inf, 1.0))


def _check_noncontractive(base: np.ndarray, emb: np.ndarray) -> None:
    bad = emb < base * (1 - REL_TOL)
    if bad.any():
        u, v = map(int, np.argwhere(bad)[0])
        raise ContractiveEmbedding(f"pair ({u}, {v}) shrinks from {base[u, v]} to {emb[u, v]}", (u, v))


@dataclass(frozen=True, eq=False)
class CoarseProfile:
    """Per-pair table: endpoints, eps at which both ends are eps/2-far,
    distortion, and the certified bound 5 * alpha(min(n, ceil(8/eps)))."""

    u: np.ndarray
    v: np.ndarray
    eps: np.ndarray
    distortion: np.ndarray
    bound: np.ndarray

    def rows(self):
        return zip(self.u.tolist(), self.v.tolist(), self.eps.tolist(),
                   self.distortion.tolist(), self.bound.tolist())


def eight_over(eps: np.ndarray, n: int) -> np.ndarray:
    """min(n, ceil(8/eps)) computed with a guard against float round-up."""
    return np.minimum(n, np.ceil(8.0 / eps - 1e-9)).astype(np.int64)


def certify_coarse_scaling(
    m_source: MetricSpace,
    m_target: np.ndarray,
    pi: PriorityRanking,
    alpha: Callable[[int], float] | Sequence[float],
    one_sided: bool = False,
) -> CoarseProfile:
    """Check that a prioritized-certified embedding has coarse scaling
    distortion 5 * alpha(8/eps) under the canonical ranking.

    ``m_target`` is the matrix of embedded distances aligned with the source
    points.  ``alpha`` maps a 1-based rank to the certified prioritized
    bound (a sequence is read with ``alpha[j-1]``) and must be
    non-decreasing.  With ``one_sided`` the pair qualifies as soon as either
    end is eps/2-far from the other.
    """
    n = m_source.n
    target = np.asarray(m_target, dtype=np.float64)
    _check_noncontractive(m_source.dist, target)
    if pi != canonical_ranking(m_source):
        raise RankingMismatch("certification requires the canonical ranking of the source metric")
    if callable(alpha):
        table = np.array([alpha(j) for j in range(1, n + 1)], dtype=np.float64)
    else:
        table = np.asarray(alpha, dtype=np.float64)[:n]
    iu, ju = np.triu_indices(n, k=1)
    eps = farness_matrix(m_source, one_sided)[iu, ju]
    dist = _ratio(m_source.dist, target)[iu, ju]
    bound = 5.0 * table[eight_over(eps, n) - 1]
    bad = np.nonzero(dist > bound * (1 + REL_TOL))[0]
    if len(bad):
        k = int(bad[np.argmax(dist[bad] / bound[bad])])
        raise CertificationError(
            "coarse-scaling",
            f"pair ({iu[k]}, {ju[k]}) at eps={eps[k]:.4g} has distortion {dist[k]} > {bound[k]}",
            (int(iu[k]), int(ju[k])),
        )
    return CoarseProfile(iu, ju, eps, dist, bound)


class WeightFunctionMu:
    """Non-increasing rank weights summing to one.

    The default is 6/(pi j)^2.  A custom ``fn`` must come with ``tail(n)``,
    the analytic value of sum_{i > n} fn(i); the partial sum plus tail is
    checked against 1 for the ranks in use.
    """

    def __init__(self, fn: Optional[Callable[[int], float]] = None,
                 tail: Optional[Callable[[int], float]] = None):
        if fn is None:
            self.fn = lambda j: 6.0 / (math.pi * j) ** 2
            self.tail = lambda n: 6.0 / math.pi**2 * float(polygamma(1, n + 1))
        else:
            if tail is None:
                raise InvalidInput("a custom mu needs an analytic tail certificate")
            self.fn, self.tail = fn, tail

    def __call__(self, j: int) -> float:
        return self.fn(j)

    def validate(self, n: int) -> None:
        vals = [self.fn(j) for j in range(1, n + 1)]
        if any(v <= 0 for v in vals) or vals[0] > 1:
            raise InvalidInput("mu must be positive with mu(1) <= 1")
        if any(b > a * (1 + 1e-12) for a, b in zip(vals, vals[1:])):
            raise InvalidInput("mu must be non-increasing")
        partial = math.fsum(vals)
        if partial > 1 + 1e-9 or abs(partial + self.tail(n) - 1) > 1e-9:
            raise InvalidInput(f"mu does not sum to 1 (partial {partial}, tail {self.tail(n)})")


@dataclass(frozen=True, eq=False)
class DuplicatedSpace:
    """Point x_i (rank i) blown up into a cluster X_i of ceil(mu(i) n) points at
    mutual distance ``delta``; clusters keep the original distances."""

    Z: MetricSpace
    groups: tuple[tuple[int, ...], ...]
    delta: float
    ranking: PriorityRanking
    mu: WeightFunctionMu

    def group(self, i: int) -> tuple[int, ...]:
        """Z-points of the rank-``i`` cluster (1-based)."""
        return self.groups[i - 1]

    def representative(self, i: int) -> int:
        return min(self.groups[i - 1])


def is_metric(D: np.ndarray, tol: float = REL_TOL) -> bool:
    """Exhaustive symmetry, zero diagonal, nonnegativity and triangle check."""
    if not np.allclose(D, D.T, rtol=0, atol=0) or np.any(np.diag(D) != 0) or np.any(D < 0):
        return False
    for k in range(D.shape[0]):
        if np.any(D > D[:, k, None] + D[None, k, :] + tol * np.maximum(1.0, D)):
            return False
    return True


def duplicate_metric(m: MetricSpace, pi: PriorityRanking,
                     mu: WeightFunctionMu | None = None) -> DuplicatedSpace:
    n = m.n
    if n < 2:
        raise DegenerateMetric("duplication needs at least two points")
    mu = mu or WeightFunctionMu()
    mu.validate(n)
    off = m.dist[~np.eye(n, dtype=bool)]
    delta = float(off.min()) / 2
    if delta <= 0:
        raise DegenerateMetric("metric has two points at distance zero")
    sizes = [max(1, math.ceil(mu(i) * n - 1e-12)) for i in range(1, n + 1)]
    owner = np.repeat(np.arange(n), sizes)  # rank index (0-based) of each Z point
    groups, start = [], 0
    for s in sizes:
        groups.append(tuple(range(start, start + s)))
        start += s
    X = np.array(pi.order)
    DZ = m.dist[np.ix_(X[owner], X[owner])].copy()
    same = owner[:, None] == owner[None, :]
    DZ[same] = delta
    np.fill_diagonal(DZ, 0.0)
    dz = DuplicatedSpace(MetricSpace(DZ), tuple(groups), delta, pi, mu)
    _certify_duplicate(m, dz)
    return dz


def _certify_duplicate(m: MetricSpace, dz: DuplicatedSpace) -> None:
    n = m.n
    N = dz.Z.n
    if N > 2 * n:
        raise CertificationError("duplicate-size", f"|Z|={N} > 2n={2 * n}")
    if N <= 300 and not is_metric(dz.Z.dist):
        raise CertificationError("duplicate-metric", "Z violates the metric axioms")
    D = dz.Z.dist
    reps = [dz.representative(i) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        Xi = list(dz.group(i))
        ui = reps[i - 1]
        for j in range(i + 1, n + 1):
            uj = reps[j - 1]
            r = D[ui, uj]
            if D[ui, Xi].max() > r or D[uj, Xi].max() > r:
                raise CertificationError("duplicate-containment",
                                         f"X_{i} not inside both balls around u_{i}, u_{j}", (i, j))


@dataclass(frozen=True, eq=False)
class PulledBack:
    """Embedding of X read off the duplicated space: ``dist`` is aligned with
    the original points; ``rank_bound[j-1]`` certifies pairs whose better end
    has rank j."""

    dist: np.ndarray
    representatives: tuple[int, ...]
    rank_bound: np.ndarray


def pull_back_embedding(dz: DuplicatedSpace, f_z: np.ndarray,
                        gamma: Callable[[float], float]) -> PulledBack:
    """Restrict an embedding of Z to one representative per cluster.

    ``f_z`` holds embedded distances between Z points and ``gamma`` its
    certified coarse scaling profile.  The pair (x_i, x_j), i < j by rank,
    is checked against gamma(mu(i)).
    """
    f_z = np.asarray(f_z, dtype=np.float64)
    _check_noncontractive(dz.Z.dist, f_z)
    pi = dz.ranking
    n = len(pi)
    reps = np.array([dz.representative(i) for i in range(1, n + 1)])
    bound = np.array([gamma(dz.mu(i)) for i in range(1, n + 1)], dtype=np.float64)
    # rank-ordered view
    base = dz.Z.dist[np.ix_(reps, reps)]
    emb = f_z[np.ix_(reps, reps)]
    ratio = np.triu(_ratio(base, emb), k=1)
    worst = ratio.max(axis=1)
    bad = np.nonzero(worst > bound * (1 + REL_TOL))[0]
    if len(bad):
        i = int(bad[0])
        j = int(np.argmax(ratio[i]))
        raise CertificationError(
            "pull-back", f"ranks ({i + 1}, {j + 1}) distortion {ratio[i, j]} > {bound[i]}",
            (pi.order[i], pi.order[j]),
        )
    # back to original point order
    X = np.array(pi.order)
    dist = np.empty((n, n))
    dist[np.ix_(X, X)] = emb
    reps_by_point = np.empty(n, dtype=np.int64)
    reps_by_point[X] = reps
    return PulledBack(dist, tuple(int(r) for r in reps_by_point), bound)
