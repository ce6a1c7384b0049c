"""Benchmark instances: the lightness/average-distortion lower-bound graph,
standard generators, and the lower-bound verifier."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from .errors import CertificationError, InvalidParams, NotApplicable
from .graph import Graph, Subgraph, build_graph, distance_matrix


def lower_bound_graph(n: int) -> Graph:
    """Complete graph on v_0..v_n: weight 1 between consecutive indices, 2 otherwise."""
    if n < 2:
        raise InvalidParams("lower_bound_graph needs n >= 2")
    edges = [
        (i, j, 1.0 if j - i == 1 else 2.0)
        for i in range(n + 1)
        for j in range(i + 1, n + 1)
    ]
    return build_graph(n + 1, edges)


def _connect_components(n: int, edges: list[tuple[int, int, float]], link_weight) -> list:
    """Join components in vertex-id order, calling ``link_weight(a, b)`` per new edge."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in edges:
        parent[find(a)] = find(b)
    reps, seen = [], set()
    for x in range(n):
        r = find(x)
        if r not in seen:
            seen.add(r)
            reps.append(x)
    extra = []
    for a, b in zip(reps, reps[1:]):
        extra.append((a, b, link_weight(a, b)))
    return edges + extra


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise InvalidParams("grid needs rows, cols >= 1 and at least two vertices")
    edges = []
    for r in range(rows):
        for c in range(cols):
            x = r * cols + c
            if c + 1 < cols:
                edges.append((x, x + 1, 1.0))
            if r + 1 < rows:
                edges.append((x, x + cols, 1.0))
    return build_graph(rows * cols, edges)


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParams("cycle needs n >= 3")
    return build_graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def path(n: int) -> Graph:
    if n < 2:
        raise InvalidParams("path needs n >= 2")
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def random_geometric(n: int, radius: float | None = None, seed: int = 0) -> Graph:
    """Uniform points in the unit square joined when within ``radius``.

    Weights are Euclidean lengths.  Components left over are chained in
    vertex-id order by the segment between their smallest vertices, so the
    output is always connected.  The default radius is
    ``1.5 * sqrt(log n / (pi n))``, just above the connectivity threshold.
    """
    if n < 2:
        raise InvalidParams("random-geometric needs n >= 2")
    if radius is None:
        radius = 1.5 * math.sqrt(math.log(n) / (math.pi * n))
    if radius <= 0:
        raise InvalidParams("radius must be positive")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    D = np.sqrt((diff**2).sum(axis=2))
    iu, ju = np.triu_indices(n, k=1)
    mask = D[iu, ju] <= radius
    edges = [(int(a), int(b), float(D[a, b])) for a, b in zip(iu[mask], ju[mask])]
    edges = _connect_components(n, edges, lambda a, b: float(D[a, b]))
    return build_graph(n, edges)


def er_weighted(n: int, p: float, seed: int = 0, low: float = 1.0, high: float = 10.0) -> Graph:
    """G(n, p) with uniform weights in [low, high); components are chained as in
    :func:`random_geometric` with a fresh uniform weight."""
    if n < 2 or not 0 <= p <= 1 or not 0 <= low <= high:
        raise InvalidParams("er-weighted needs n >= 2, p in [0, 1], 0 <= low <= high")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    ws = rng.uniform(low, high, size=len(iu))
    edges = [(int(a), int(b), float(w)) for a, b, w in zip(iu[keep], ju[keep], ws[keep])]
    edges = _connect_components(n, edges, lambda a, b: float(rng.uniform(low, high)))
    return build_graph(n, edges)


GENERATORS = {
    "grid": grid,
    "random-geometric": random_geometric,
    "er-weighted": er_weighted,
    "cycle": cycle,
    "path": path,
    "lower-bound": lower_bound_graph,
}


def generators(kind: str, seed: int = 0, **params) -> Graph:
    """Dispatch to a named generator; deterministic under (kind, params, seed)."""
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise InvalidParams(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    if kind in ("random-geometric", "er-weighted"):
        params["seed"] = seed
    try:
        return fn(**params)
    except TypeError as exc:
        raise InvalidParams(f"bad parameters for {kind}: {exc}") from None


@dataclass
class LowerBoundVerdict:
    n: int
    rho: float
    lightness: float
    dist1: float
    threshold: float
    q: int
    k: int
    S: int
    N: int
    N_bound: float
    min_F: int
    F_bound: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.dist1 / self.threshold

    def as_dict(self) -> dict:
        return asdict(self) | {"margin": self.margin}


def weight_ledger(n: int, q: int, weight: float, rho: float) -> int:
    """Accounting behind the lower bound: w(H) >= n + q and hence q <= ceil(rho n).

    Raises :class:`CertificationError` if the numbers handed in contradict
    each other, which can only mean the harness itself mismeasured.
    Returns k = ceil(rho n).
    """
    k = math.ceil(rho * n - 1e-9)
    if weight < n + q - 1e-9:
        raise CertificationError("lb-ledger", f"w(H)={weight} < n+q={n + q}", (n, q))
    if weight <= n * (1 + rho) + 1e-9 and q > k:
        raise CertificationError(
            "lb-ledger", f"{q} weight-2 edges but lightness <= 1+{rho} allows at most {k}", (q, k)
        )
    return k


def verify_lower_bound(g: Graph, h: Subgraph, rho: float) -> LowerBoundVerdict:
    """Check that a light subgraph of :func:`lower_bound_graph` has average
    distortion at least 1/(128 rho), with the intermediate counts of the
    argument reported alongside."""
    n = g.n - 1
    if n < 32 or not (1.0 / n - 1e-12 <= rho <= 1.0 / 32 + 1e-12):
        raise NotApplicable(f"need n >= 32 and rho in [1/n, 1/32]; got n={n}, rho={rho}")
    if h.parent is not g:
        raise NotApplicable("subgraph does not belong to this graph")
    expected = np.where(np.abs(g.u - g.v) == 1, 1.0, 2.0)
    if g.m != math.comb(g.n, 2) or not np.array_equal(g.w, expected):
        raise NotApplicable("graph is not a lower-bound instance")
    w = h.weight
    lightness = w / n
    if lightness > 1 + rho + 1e-12:
        raise NotApplicable(f"lightness {lightness} exceeds 1+{rho}")
    heavy = [e for e in h.edges() if abs(e.u - e.v) != 1]
    q = len(heavy)
    k = weight_ledger(n, q, w, rho)
    S = sorted({x for e in heavy for x in (e.u, e.v)})
    delta = 1.0 / (32 * rho)
    hops = math.floor(delta)
    unit_adj: list[list[int]] = [[] for _ in range(g.n)]
    for e in h.edges():
        if abs(e.u - e.v) == 1:
            unit_adj[e.u].append(e.v)
            unit_adj[e.v].append(e.u)
    near: set[int] = set()
    for s in S:
        seen = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            if seen[x] == hops:
                continue
            for y in unit_adj[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    queue.append(y)
        near.update(seen)
    DG = distance_matrix(g)
    DH = distance_matrix(h)
    iu, ju = np.triu_indices(g.n, k=1)
    dist1 = float((DH[iu, ju] / DG[iu, ju]).mean())
    far_rows = [x for x in range(g.n) if x not in near]
    min_F = int((DH[far_rows] > delta).sum(axis=1).min()) if far_rows else g.n
    threshold = 1.0 / (128 * rho)
    verdict = LowerBoundVerdict(
        n=n, rho=rho, lightness=lightness, dist1=dist1, threshold=threshold, q=q, k=k,
        S=len(S), N=len(near), N_bound=3 * n / 8, min_F=min_F, F_bound=n - 2 * delta - 1,
        passed=False,
    )
    checks = {
        "lb-S": len(S) <= 2 * q,
        "lb-N": len(near) <= 3 * n / 8,
        "lb-F": min_F >= n - 2 * delta - 1,
        "lb-dist1": dist1 >= threshold,
    }
    for name, ok in checks.items():
        if not ok:
            raise CertificationError(name, f"lower-bound step failed: {verdict.as_dict()}")
    verdict.passed = True
    return verdict
