import json

import numpy as np
import pytest

from lightspan.benchgen import cycle, random_geometric
from lightspan.cli import main
from lightspan.errors import InvalidInput
from lightspan.graph import mst
from lightspan.io import (
    read_graph,
    read_matrix,
    read_ranking,
    read_subgraph,
    write_graph,
    write_matrix,
    write_ranking,
)
from lightspan.prioritized import PriorityRanking


def test_edge_list_roundtrip(tmp_path):
    g = random_geometric(30, seed=1)
    p = tmp_path / "g.txt"
    write_graph(p, g)
    h = read_graph(p)
    assert h.n == g.n and h.u.tolist() == g.u.tolist() and h.w.tolist() == g.w.tolist()


def test_edge_list_comments_and_errors(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# cycle\n3 3\n0 1 1.5  # first\n1 2 1\n\n2 0 2\n")
    g = read_graph(p)
    assert g.m == 3 and g.w[g.edge_id(0, 1)] == 1.5
    p.write_text("3 4\n0 1 1\n1 2 1\n2 0 2\n")
    with pytest.raises(InvalidInput):
        read_graph(p)


def test_subgraph_ranking_matrix_roundtrip(tmp_path):
    g = cycle(6)
    T = mst(g)
    from lightspan.io import write_subgraph

    write_subgraph(tmp_path / "t.txt", T)
    assert read_subgraph(tmp_path / "t.txt", g) == T
    pi = PriorityRanking([3, 1, 0, 2])
    write_ranking(tmp_path / "r.txt", pi)
    assert read_ranking(tmp_path / "r.txt") == pi
    D = np.arange(9.0).reshape(3, 3) / 7
    write_matrix(tmp_path / "d.txt", D)
    assert np.array_equal(read_matrix(tmp_path / "d.txt"), D)


def test_gen_cycle(tmp_path, capsys):
    out = tmp_path / "c4.txt"
    assert main(["gen", "cycle", "--n", "4", "-o", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "4 4"


def test_pipeline_tree_then_analyze(tmp_path, capsys):
    geo = tmp_path / "geo.txt"
    tree = tmp_path / "tree.txt"
    assert main(["gen", "random-geometric", "--n", "128", "--seed", "7", "-o", str(geo)]) == 0
    assert main(["tree", "--rho", "0.5", "--input", str(geo), "-o", str(tree)]) == 0
    prefix = str(tmp_path / "rep")
    capsys.readouterr()
    assert main(["analyze", "--input", str(tree), "--against", str(geo), "--prefix", prefix]) == 0
    report = json.loads((tmp_path / "rep.json").read_text())
    assert report["lightness"] <= 1.5
    assert set(report["dist_q"]) == {"1", "2", "inf"}
    assert (tmp_path / "rep.csv").read_text().startswith("eps,gamma,gamma_coarse\n")


def test_idempotent_artifacts(tmp_path):
    geo = tmp_path / "geo.txt"
    main(["gen", "random-geometric", "--n", "64", "--seed", "3", "-o", str(geo)])
    outs = []
    for k in range(2):
        s = tmp_path / f"s{k}.txt"
        main(["spanner", "--input", str(geo), "--rho", "0.25", "-o", str(s)])
        main(["analyze", "--input", str(s), "--against", str(geo), "--prefix", str(tmp_path / f"r{k}")])
        outs.append((s.read_bytes(), (tmp_path / f"r{k}.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_spanner_terminal_mode(tmp_path):
    geo = tmp_path / "geo.txt"
    main(["gen", "random-geometric", "--n", "40", "-o", str(geo)])
    (tmp_path / "K.txt").write_text("0\n5\n9\n")
    rc = main(["spanner", "--input", str(geo), "--mode", "terminal", "--terminals",
               str(tmp_path / "K.txt"), "--delta", "0.5", "-o", str(tmp_path / "h.txt")])
    assert rc == 0


def test_certify_and_verify_lb(tmp_path, capsys):
    assert main(["certify", "--theorem", "3.2", "--n", "32"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "pass"
    lb = tmp_path / "lb.txt"
    assert main(["gen", "lower-bound", "--n", "64", "-o", str(lb)]) == 0
    t = tmp_path / "t.txt"
    assert main(["tree", "--rho", "0.03125", "--input", str(lb), "-o", str(t)]) == 0
    assert main(["verify-lb", "--input", str(t), "--against", str(lb), "--rho", "0.03125"]) == 0


def test_failure_json(tmp_path, capsys):
    g = cycle(40)
    gp = tmp_path / "g.txt"
    write_graph(gp, g)
    # the whole graph is too heavy for the lower-bound hypothesis
    assert main(["verify-lb", "--input", str(gp), "--against", str(gp), "--rho", "0.03125"]) == 3
    err = json.loads(capsys.readouterr().err)
    assert err["status"] == "not-applicable"
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 1 1\n")
    assert main(["analyze", "--input", str(bad), "--against", str(bad)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "DisconnectedGraph"
