import math

import numpy as np
import pytest
from hypothesis import given

from conftest import graphs
from lightspan.benchgen import cycle, lower_bound_graph, path, random_geometric
from lightspan.errors import DisconnectedGraph, InvalidInput, NotATree
from lightspan.graph import Subgraph, distance_matrix, mst
from lightspan.metrics import scaling_profile
from lightspan.trees import (
    TreeStrategy,
    compose_profiles,
    composition_violations,
    light_tree,
    median_vertex,
    spanning_tree,
)

STRATS = ("mst-of-spanner", "last-median")


def test_tree_fixed_point():
    g = path(6)
    for s in STRATS:
        assert spanning_tree(g.full(), s) == g.full()
    plug = TreeStrategy("plugin", edges=tuple((e.u, e.v, e.weight) for e in g.full().edges()))
    assert spanning_tree(g.full(), plug) == g.full()


def test_c4_strategies():
    g = cycle(4)
    assert spanning_tree(g.full()).edge_ids == frozenset({0, 1, 2})
    T = spanning_tree(g.full(), "last-median")
    assert T.is_spanning_tree()
    root = median_vertex(g.full())
    assert np.all(distance_matrix(T, [root]) <= 3 * distance_matrix(g, [root]))


def test_plugin_validation():
    g = cycle(5)
    H = mst(g)
    with pytest.raises(NotATree):
        spanning_tree(H, TreeStrategy("plugin", edges=((0, 1, 1.0), (1, 2, 1.0))))
    with pytest.raises(NotATree):
        spanning_tree(H, TreeStrategy("plugin", edges=((0, 2, 1.0),)))
    missing = next(iter(set(range(g.m)) - H.edge_ids))
    e = g.edges[missing]
    with pytest.raises(NotATree):
        spanning_tree(H, TreeStrategy("plugin", edges=((e.u, e.v, e.weight),)))
    with pytest.raises(InvalidInput):
        TreeStrategy("bogus")
    with pytest.raises(DisconnectedGraph):
        spanning_tree(Subgraph(g, [0]))


@given(graphs(min_n=2, max_n=12, integral=False))
def test_tree_validity(g):
    H = g.full()
    for s in STRATS:
        T = spanning_tree(H, s)
        assert T.is_spanning_tree() and T <= H
    assert spanning_tree(H) == mst(g)


def test_compose_profiles():
    one = lambda e: 1.0
    beta = lambda e: 1 / math.sqrt(e)
    assert compose_profiles(one, beta)(0.5) == beta(0.25)
    assert math.isclose(compose_profiles(beta, beta)(0.2), 2 / 0.2)


def test_light_tree_on_tree():
    g = path(10)
    T, rep = light_tree(g, rho=0.5)
    assert T == g.full()
    assert np.all(rep.profile_tree.distortion == 1)


def test_light_tree_lower_bound_graph():
    g = lower_bound_graph(64)
    for s in STRATS:
        T, rep = light_tree(g, rho=0.25, strategy=s, measure=False)
        assert T.weight <= 1.25 * mst(g).weight
        assert rep.lightness_tree <= rep.lightness_spanner <= 1.25


def test_light_tree_report_geometric():
    g = random_geometric(256, seed=7)
    T, rep = light_tree(g, rho=0.5)
    table = rep.scaling_table()
    assert len(table) == len(rep.grid)
    assert all("gamma_sqrt_eps" in row for row in table)
    assert rep.dist1 >= 1
    gt = scaling_profile(rep.profile_tree)
    # composition bound dominates on the grid
    for row in table:
        assert gt(row["eps"]) <= row["composed_bound"] * (1 + 1e-9)
    for eps, count, budget in composition_violations(rep.profile_spanner, rep.profile_stage2, rep.grid):
        assert count <= budget
    DG = distance_matrix(g)
    DH = distance_matrix(rep.spanner)
    DT = distance_matrix(T)
    assert np.all(DT >= DH - 1e-9) and np.all(DH >= DG - 1e-9)
