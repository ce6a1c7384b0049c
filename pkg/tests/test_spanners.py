import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from lightspan.benchgen import cycle, er_weighted, grid, lower_bound_graph, random_geometric
from lightspan.errors import AlphaOutOfRange, DeltaOutOfRange, EmptySourceSet, NotTheMst
from lightspan.graph import MetricSpace, Subgraph, build_graph, distance_matrix, mst
from lightspan.greedy import SpannerParams, backbone_t, greedy_spanner, terminal_backbone
from lightspan.reduction import SpannerBuilder, reduce, reduce_detailed, reweight
from lightspan.slt import slt
from oracles import floyd_warshall, sub_edges


def _ref(g, ids=None):
    ids = range(g.m) if ids is None else ids
    return np.array(floyd_warshall(g.n, sub_edges(g, ids)))


def test_params_validate():
    assert SpannerParams(3).stretch == 5
    with pytest.raises(ValueError):
        SpannerParams(0)


def test_greedy_c5_is_a_path():
    g = cycle(5)
    H = greedy_spanner(g, 3)
    assert len(H) == 4 and H.is_spanning_tree()
    ratio = _ref(g, H.ids) / np.where(_ref(g) > 0, _ref(g), 1)
    assert ratio.max() == 4


def test_greedy_uniform_metric():
    D = np.ones((4, 4)) - np.eye(4)
    pairs = greedy_spanner(MetricSpace(D), 2)
    assert pairs == [(0, 1), (0, 2), (0, 3)]


def test_greedy_t1_keeps_metric_exact():
    rng = np.random.default_rng(0)
    P = rng.random((12, 2))
    D = np.sqrt(((P[:, None] - P[None]) ** 2).sum(-1))
    pairs = greedy_spanner(MetricSpace(D), 1)
    H = build_graph(12, [(a, b, D[a, b]) for a, b in pairs])
    assert np.allclose(distance_matrix(H), D)


@given(graphs(max_n=12, integral=False), st.integers(1, 4))
def test_greedy_certificate_and_mst(g, t):
    H = greedy_spanner(g, t)
    assert mst(g) <= H
    DG, DH = _ref(g), _ref(g, H.ids)
    assert np.all(DH <= (2 * t - 1) * DG * (1 + 1e-9) + 1e-12)
    assert greedy_spanner(g, t) == H


@pytest.mark.parametrize("seed", [0, 1])
def test_greedy_certificate_n200(seed):
    g = er_weighted(200, 0.05, seed=seed)
    H = greedy_spanner(g, 2)
    DG, DH = _ref(g), _ref(g, H.ids)
    assert np.all(DH <= 3 * DG * (1 + 1e-9))


def test_backbone_examples():
    g = cycle(8)
    assert len(terminal_backbone(g, [3])) == 0
    B = terminal_backbone(g, [0, 3])
    assert distance_matrix(B, [0])[0, 3] == 3
    B = terminal_backbone(g, range(8))
    assert backbone_t(8) == 4
    assert distance_matrix(B).max() <= 7


@given(graphs(max_n=12, integral=False), st.data())
def test_backbone_terminal_stretch(g, data):
    K = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    B = terminal_backbone(g, K)
    s = 2 * backbone_t(len(K)) - 1
    DG, DB = _ref(g), _ref(g, B.ids)
    for a in K:
        for b in K:
            assert DB[a, b] <= s * DG[a, b] * (1 + 1e-9) + 1e-12


def test_slt_examples():
    g = cycle(6)
    assert slt(g, range(6), 2) == mst(g)
    star = build_graph(5, [(0, i, 1) for i in range(1, 5)])
    assert slt(star, [0], 2) == mst(star)
    with pytest.raises(AlphaOutOfRange):
        slt(g, [0], 1.0)
    with pytest.raises(EmptySourceSet):
        slt(g, [], 2)


@pytest.mark.parametrize("m", range(2, 9))
def test_slt_even_cycles(m):
    g = cycle(2 * m)
    S = slt(g, [0], 2)
    DG, DS = _ref(g), _ref(g, S.ids)
    assert np.all(DS[0] <= 2 * DG[0])
    assert S.weight <= 3 * mst(g).weight


@given(graphs(max_n=12, integral=False), st.data(), st.sampled_from([1.2, 1.5, 2, 3, 8]))
def test_slt_bounds(g, data, alpha):
    K = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    S = slt(g, K, alpha)
    assert mst(g) <= S
    DG, DS = _ref(g), _ref(g, S.ids)
    dG, dS = DG[K].min(axis=0), DS[K].min(axis=0)
    assert np.all(dS <= alpha * dG * (1 + 1e-9) + 1e-12)
    assert S.weight <= (1 + 2 / (alpha - 1)) * mst(g).weight * (1 + 1e-9)


@pytest.mark.parametrize("make", [lambda: grid(16, 16), lambda: cycle(256),
                                  lambda: lower_bound_graph(256), lambda: random_geometric(256, seed=7)])
def test_slt_weight_monotone_in_alpha_on_corpus(make):
    # an empirical property of the construction, not a guarantee; checked on the fixed corpus
    g = make()
    for K in ([0], [0, 5, 17], list(range(0, g.n, 9))):
        ws = [slt(g, K, a).weight for a in (1.5, 2, 4, 8)]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(ws, ws[1:]))


def test_reweight_examples():
    tri = build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 2)])
    T = mst(tri)
    assert reweight(tri, T, 1.0).w.tolist() == tri.w.tolist()
    assert reweight(tri, T, 0.5).w[tri.edge_id(0, 2)] == 4
    with pytest.raises(DeltaOutOfRange):
        reweight(tri, T, 0)
    with pytest.raises(NotTheMst):
        reweight(tri, Subgraph(tri, [0, 2]), 0.5)


@given(graphs(max_n=10, integral=False), st.floats(0.01, 1.0))
def test_reweight_keeps_mst(g, delta):
    T = mst(g)
    assert mst(reweight(g, T, delta)).edge_ids == T.edge_ids


def test_reduce_identity_builders():
    g = cycle(4)
    assert reduce(lambda gp: gp.full(), g, 1.0) == g.full()
    assert reduce(mst, g, 0.5) == mst(g)


def test_reduce_greedy_on_lower_bound_graph():
    g = lower_bound_graph(16)
    rep = reduce_detailed(SpannerBuilder(lambda gp: greedy_spanner(gp, 2)), g, 0.25)
    H = rep.spanner
    assert H.weight <= rep.lightness_bound * mst(g).weight * (1 + 1e-9)
    assert np.all(_ref(g, H.ids) <= 12 * _ref(g) * (1 + 1e-9))


@given(graphs(max_n=10, integral=False), st.floats(0.05, 1.0), st.integers(1, 3))
def test_reduce_chain(g, delta, t):
    rep = reduce_detailed(lambda gp: greedy_spanner(gp, t), g, delta)
    H, T, gp = rep.spanner, rep.mst, rep.reweighted
    assert T <= H
    assert abs(H.weight - T.weight - rep.extra_weight) <= 1e-9 * max(1, H.weight)
    DG = _ref(g)
    DGp = np.array(floyd_warshall(g.n, sub_edges(gp, range(gp.m))))
    DHp = np.array(floyd_warshall(g.n, sub_edges(gp, rep.base.ids)))
    DH = _ref(g, H.ids)
    tol = 1 + 1e-9
    assert np.all(DH <= DHp * tol + 1e-12)
    assert np.all(DHp <= (2 * t - 1) * DGp * tol + 1e-12)
    assert np.all(DGp <= DG / delta * tol + 1e-12)
