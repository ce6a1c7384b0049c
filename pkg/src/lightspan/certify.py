"""End-to-end certification suites, one per guarantee the library ships.

Each suite builds its artifacts on generated instances, checks every
assertion exactly, and returns a JSON-ready verdict.  A violated
invariant surfaces as :class:`CertificationError` carrying a witness.
"""

from __future__ import annotations

import math

import numpy as np

from .benchgen import er_weighted, lower_bound_graph, random_geometric, verify_lower_bound
from .errors import CertificationError, InvalidParams, NotApplicable
from .graph import REL_TOL, MetricSpace, build_graph, distance_matrix, leq, mst
from .metrics import (
    coarse_profile,
    epsilon_grid,
    lemma21_check,
    lightness,
    prioritized_profile,
    profile_from_matrices,
)
from .prioritized import (
    PriorityRanking,
    prioritized_spanner_detailed,
    terminal_distortion_bound,
    terminal_spanner_detailed,
)
from .reduction import reweight
from .scaling import (
    canonical_ranking,
    certify_coarse_scaling,
    duplicate_metric,
    pull_back_embedding,
)
from .slt import slt
from .trees import composition_violations, light_tree

THEOREMS = ("3.1", "3.2", "4.1", "4.2", "5.1", "6.1")


def _fail(invariant: str, message: str, witness=None):
    raise CertificationError(invariant, message, witness)


def terminal_suite(n: int = 128, rho: float = 0.5, seed: int = 0) -> dict:
    """Terminal spanners for |K| in {4, 16, 64} and delta in {0.25, 1}; all
    K x V pairs within the certified bound, lightness within 1 + delta * l."""
    g = random_geometric(n, seed=seed)
    DG = distance_matrix(g)
    rows = []
    for k in (4, 16, 64):
        if k > n:
            continue
        K = list(range(k))
        for delta in (0.25, 1.0):
            rep = terminal_spanner_detailed(g, K, delta)
            DH = distance_matrix(rep.spanner, K)
            ratio = DH / np.where(DG[K] > 0, DG[K], 1.0)
            worst = float(ratio.max())
            bound = terminal_distortion_bound(k, delta)
            if not leq(worst, bound):
                _fail("terminal-distortion", f"k={k} delta={delta}: {worst} > {bound}")
            rows.append({"k": k, "delta": delta, "worst": worst, "bound": bound,
                         "lightness": lightness(g, rep.spanner), "lightness_bound": rep.lightness_bound})
    return {"instances": rows}


def reduction_suite(n: int = 64, rho: float = 0.5, seed: int = 0, trials: int = 20) -> dict:
    """Weight ledger and MST preservation of the reweighting on random graphs."""
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        g = er_weighted(n, 0.2, seed=int(rng.integers(2**31)))
        delta = float(rng.uniform(0.05, 1.0))
        T = mst(g)
        gp = reweight(g, T, delta)
        if mst(gp).edge_ids != T.edge_ids:
            _fail("mst-preserved", f"trial {t}: reweighting changed the MST")
        rep = terminal_spanner_detailed(g, range(min(8, n)), delta)
        ledger = rep.spanner.weight - T.weight
        if abs(ledger - rep.extra_weight) > REL_TOL * max(1.0, rep.spanner.weight):
            _fail("weight-ledger", f"trial {t}: {ledger} != {rep.extra_weight}")
        out.append({"delta": delta, "ledger": ledger, "lightness": lightness(g, rep.spanner)})
    return {"trials": out}


def coarse_suite(n: int = 128, rho: float = 0.5, seed: int = 0) -> dict:
    """Canonical ranking plus prioritized spanner has coarse scaling
    distortion 5 * alpha_env(min(n, ceil(8/eps)))."""
    g = random_geometric(n, seed=seed)
    m = MetricSpace(distance_matrix(g))
    pi = canonical_ranking(m)
    rep = prioritized_spanner_detailed(g, pi, rho)
    DH = distance_matrix(rep.spanner)
    p = profile_from_matrices(m, DH)
    env = prioritized_profile(p, pi).env_table(n)
    certify_coarse_scaling(m, DH, pi, env)
    certify_coarse_scaling(m, DH, pi, rep.bounds())
    gc = coarse_profile(p)
    table = []
    for eps in epsilon_grid(n):
        j = min(n, math.ceil(8 / eps - 1e-9))
        bound = 5 * env[j - 1]
        if not leq(gc(eps), bound):
            _fail("coarse-scaling", f"eps={eps}: {gc(eps)} > {bound}")
        table.append({"eps": float(eps), "gamma_coarse": gc(eps), "bound": bound})
    return {"lightness": rep.lightness, "table": table}


def metric_graph(D: np.ndarray):
    """Complete graph realizing a finite metric."""
    n = D.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    return build_graph(n, zip(iu.tolist(), ju.tolist(), D[iu, ju].tolist()))


def duplication_suite(n: int = 64, rho: float = 0.5, seed: int = 0) -> dict:
    """Blow a metric up into Z, embed Z with a light spanner, and read the
    prioritized guarantee gamma(mu(i)) back on the original points."""
    if n > 128:
        raise InvalidParams("duplication suite is limited to n <= 128")
    g = random_geometric(n, seed=seed)
    m = MetricSpace(distance_matrix(g))
    pi = PriorityRanking.identity(n)
    dz = duplicate_metric(m, pi)
    if dz.Z.n > 2 * n:
        _fail("duplicate-size", f"|Z|={dz.Z.n} > {2 * n}")
    gz = metric_graph(dz.Z.dist)
    hz = prioritized_spanner_detailed(gz, canonical_ranking(dz.Z), rho).spanner
    fz = distance_matrix(hz)
    gamma = coarse_profile(profile_from_matrices(dz.Z, fz))
    back = pull_back_embedding(dz, fz, gamma)
    return {"Z": dz.Z.n, "bounds": back.rank_bound.tolist()}


def tree_suite(n: int = 128, rho: float = 0.5, seed: int = 0) -> dict:
    """Light tree: lightness chain, non-contraction, the composition count and
    the l_q bound from the scaling profile."""
    g = random_geometric(n, seed=seed)
    T, rep = light_tree(g, rho=rho)
    if not (rep.lightness_tree <= rep.lightness_spanner * (1 + REL_TOL) <= (1 + rho) * (1 + REL_TOL)):
        _fail("lightness-chain", f"{rep.lightness_tree} / {rep.lightness_spanner} / {1 + rho}")
    for eps, count, budget in composition_violations(rep.profile_spanner, rep.profile_stage2, rep.grid):
        if count > budget * (1 + REL_TOL):
            _fail("composition-count", f"eps={eps}: {count} pairs > {budget}")
    for prof in (rep.profile_spanner, rep.profile_tree):
        if prof.distortion.min() < 1 - REL_TOL:
            _fail("non-contraction", "distortion below 1")
        for q in (1, 2):
            lhs, rhs, ok = lemma21_check(prof, q)
            if not ok:
                _fail("lq-from-scaling", f"q={q}: {lhs} > {rhs}")
    return rep.summary()


def lower_bound_suite(n: int = 256, rho: float = 1 / 32, seed: int = 0) -> dict:
    """Every light artifact on the lower-bound graph has dist_1 >= 1/(128 rho)."""
    g = lower_bound_graph(n)
    pi = canonical_ranking(MetricSpace(distance_matrix(g)))
    artifacts = {
        "mst": mst(g),
        "prioritized": prioritized_spanner_detailed(g, pi, rho, verify=False).spanner,
        "light-tree": light_tree(g, pi, rho, measure=False)[0],
        "light-tree-last": light_tree(g, pi, rho, strategy="last-median", measure=False)[0],
        # alpha = 1 + 2/rho makes the SLT itself (1 + rho)-light
        "slt": slt(g, [0], 1 + 2 / rho),
    }
    out = {}
    for name, h in artifacts.items():
        try:
            out[name] = verify_lower_bound(g, h, rho).as_dict()
        except NotApplicable as exc:
            out[name] = {"skipped": str(exc)}
    return out


SUITES = {
    "3.1": terminal_suite,
    "3.2": reduction_suite,
    "4.1": coarse_suite,
    "4.2": duplication_suite,
    "5.1": tree_suite,
    "6.1": lower_bound_suite,
}


def run(theorem: str, **params) -> dict:
    try:
        suite = SUITES[theorem]
    except KeyError:
        raise InvalidParams(f"unknown suite {theorem!r}; choose from {THEOREMS}") from None
    return suite(**{k: v for k, v in params.items() if v is not None})
