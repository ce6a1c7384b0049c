import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from lightspan.benchgen import cycle, lower_bound_graph, random_geometric
from lightspan.errors import CertificationError, InvalidInput
from lightspan.graph import mst
from lightspan.prioritized import (
    PriorityRanking,
    certify_prioritized,
    level_sizes,
    prioritized_spanner,
    prioritized_spanner_detailed,
    priority_weight,
    schedule,
    terminal_distortion_bound,
    terminal_spanner,
    terminal_spanner_detailed,
)
from oracles import floyd_warshall, sub_edges


def _stretch(g, H, rows=None):
    DG = np.array(floyd_warshall(g.n, sub_edges(g, range(g.m))))
    DH = np.array(floyd_warshall(g.n, sub_edges(g, H.ids)))
    R = DH / np.where(DG > 0, DG, 1)
    return R if rows is None else R[rows]


def test_ranking():
    pi = PriorityRanking([2, 0, 1])
    assert pi.rank(2) == 1 and pi.rank(1) == 3
    assert pi.prefix(2) == (2, 0)
    with pytest.raises(InvalidInput):
        PriorityRanking([0, 0, 1])


def test_terminal_single_root():
    g = random_geometric(40, seed=1)
    H = terminal_spanner(g, [5], 1.0)
    assert mst(g) <= H
    assert _stretch(g, H, [5]).max() <= 2 + 1e-9


def test_terminal_cycle_all():
    g = cycle(8)
    H = terminal_spanner(g, range(8), 1.0)
    assert _stretch(g, H).max() <= 3 * (2 * math.log2(8) + 3)


def test_terminal_lower_bound_graph():
    g = lower_bound_graph(32)
    rep = terminal_spanner_detailed(g, range(4), 0.5, verify=True)
    assert rep.spanner.weight <= rep.lightness_bound * mst(g).weight * (1 + 1e-9)
    assert _stretch(g, rep.spanner, list(range(4))).max() <= 3 * (2 * 2 + 3) / 0.5


@given(graphs(max_n=10, integral=False), st.data(), st.sampled_from([0.25, 0.5, 1.0]))
def test_terminal_bound_property(g, data, delta):
    K = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    H = terminal_spanner(g, K, delta)
    assert mst(g) <= H
    assert _stretch(g, H, K).max() <= terminal_distortion_bound(len(K), delta) * (1 + 1e-9)


def test_schedule_shape():
    assert level_sizes(4) == [4]
    assert level_sizes(256) == [4, 16, 256]
    pi = PriorityRanking.identity(256)
    s = schedule(pi, 0.5)
    assert [len(l.terminals) for l in s.levels] == [4, 16, 256]
    for a, b in zip(s.levels, s.levels[1:]):
        assert set(a.terminals) <= set(b.terminals)
        assert a.delta >= b.delta
    assert s.level_of_rank(1) == 0 and s.level_of_rank(5) == 1 and s.level_of_rank(200) == 2


def test_priority_weight_positive_increasing():
    vals = [priority_weight(j) for j in range(1, 500)]
    assert all(v > 0 for v in vals)
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_single_level_small_graph():
    g = cycle(4)
    rep = prioritized_spanner_detailed(g, PriorityRanking.identity(4), 0.5)
    assert len(rep.schedule.levels) == 1
    assert rep.lightness <= 1.5


def test_lower_bound_graph_identity():
    g = lower_bound_graph(64)
    rep = prioritized_spanner_detailed(g, PriorityRanking.identity(g.n), 0.5)
    assert rep.lightness <= 1.5
    assert math.isfinite(rep.constant)
    b = rep.bounds()
    assert np.all(np.diff(b) >= 0)
    # uniform bound is the last rank's bound
    assert _stretch(g, rep.spanner).max() <= b[-1] * (1 + 1e-9)


@given(graphs(min_n=3, max_n=12, integral=False), st.sampled_from([0.1, 0.5, 0.9]), st.randoms())
def test_prioritized_property(g, rho, rnd):
    order = list(range(g.n))
    rnd.shuffle(order)
    pi = PriorityRanking(order)
    rep = prioritized_spanner_detailed(g, pi, rho)
    H = rep.spanner
    assert mst(g) <= H
    assert H.weight <= (1 + rho) * mst(g).weight * (1 + 1e-12)
    for r in rep.level_reports:
        assert r.mst.edge_ids == mst(g).edge_ids
    R = _stretch(g, H)
    for j in range(1, g.n):
        vj = pi.order[j - 1]
        later = list(pi.order[j:])
        assert R[vj, later].max() <= rep.bound(j) * (1 + 1e-9)


def test_certify_flags_tampered_report():
    g = random_geometric(30, seed=2)
    rep = prioritized_spanner_detailed(g, PriorityRanking.identity(30), 0.5)
    from dataclasses import replace

    broken = replace(rep, spanner=mst(g), level_bounds=tuple(1.0 for _ in rep.level_bounds))
    with pytest.raises(CertificationError) as exc:
        certify_prioritized(g, broken)
    assert exc.value.invariant == "prioritized-distortion"


def test_prioritized_rejects_bad_rho():
    with pytest.raises(InvalidInput):
        prioritized_spanner(cycle(5), PriorityRanking.identity(5), 1.0)
