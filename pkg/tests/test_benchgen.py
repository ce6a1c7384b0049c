import math

import pytest

from lightspan.benchgen import (
    generators,
    lower_bound_graph,
    random_geometric,
    verify_lower_bound,
    weight_ledger,
)
from lightspan.errors import CertificationError, InvalidParams, NotApplicable
from lightspan.graph import Subgraph, mst
from lightspan.trees import light_tree


def test_lower_bound_graph_shape():
    g = lower_bound_graph(2)
    assert sorted(g.w.tolist()) == [1, 1, 2]
    for n in (2, 8, 20):
        g = lower_bound_graph(n)
        assert g.n == n + 1 and g.m == math.comb(n + 1, 2)
        assert (g.w == 1).sum() == n
        assert g.w[g.edge_id(0, 2)] == 2
        assert mst(g).weight == n


def test_generators():
    c = generators("cycle", n=4)
    assert c.m == 4 and set(c.w.tolist()) == {1.0}
    gr = generators("grid", rows=3, cols=3)
    assert gr.n == 9 and gr.m == 12
    a = random_geometric(256, seed=7)
    b = generators("random-geometric", seed=7, n=256)
    assert a.u.tolist() == b.u.tolist() and a.w.tolist() == b.w.tolist()
    er = generators("er-weighted", seed=1, n=30, p=0.0)
    assert er.m == 29
    with pytest.raises(InvalidParams):
        generators("nope")
    with pytest.raises(InvalidParams):
        generators("cycle", n=2)
    with pytest.raises(InvalidParams):
        generators("grid", rows=3)


def test_verify_lower_bound_mst():
    g = lower_bound_graph(32)
    v = verify_lower_bound(g, mst(g), 1 / 32)
    assert v.passed and v.dist1 >= 0.25 and v.q == 0


def test_verify_lower_bound_light_tree():
    g = lower_bound_graph(256)
    T, _ = light_tree(g, rho=1 / 32, measure=False)
    v = verify_lower_bound(g, T, 1 / 32)
    assert v.passed and v.margin >= 1
    assert v.S <= 2 * v.q and v.N <= v.N_bound and v.min_F >= v.F_bound


def test_verify_not_applicable():
    g = lower_bound_graph(32)
    with pytest.raises(NotApplicable):
        verify_lower_bound(g, g.full(), 1 / 32)
    with pytest.raises(NotApplicable):
        verify_lower_bound(g, mst(g), 0.5)
    small = lower_bound_graph(16)
    with pytest.raises(NotApplicable):
        verify_lower_bound(small, mst(small), 1 / 16)


def test_ledger_flags_impossible_counts():
    n, rho = 256, 1 / 32
    k = math.ceil(rho * n)
    # k+1 weight-2 edges cannot fit in a (1+rho)-light subgraph
    with pytest.raises(CertificationError) as exc:
        weight_ledger(n, k + 1, n * (1 + rho), rho)
    assert exc.value.invariant == "lb-ledger"
    with pytest.raises(CertificationError):
        weight_ledger(n, 3, n + 1, rho)
    assert weight_ledger(n, k, n + k, rho) == k


def test_verify_ledger_on_heavy_edges():
    g = lower_bound_graph(64)
    rho = 1 / 32
    # one weight-2 edge spends the whole budget: w = n + 2 = (1 + rho) n
    h = mst(g) | Subgraph(g, [g.edge_id(0, 2)])
    v = verify_lower_bound(g, h, rho)
    assert v.q == 1 and v.k == 2 and v.S == 2
