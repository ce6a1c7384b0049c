"""Command line: generate instances, build spanners and trees, measure, certify."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import certify
from .benchgen import GENERATORS, generators, verify_lower_bound
from .errors import CertificationError, LightspanError, NotApplicable
from .graph import MetricSpace, distance_matrix
from .io import read_graph, read_ranking, read_subgraph, read_vertices, write_graph, write_subgraph
from .metrics import (
    MAX_EXACT_N,
    lemma21_check,
    measure,
    report_dict,
    write_profile_csv,
    write_report_json,
)
from .prioritized import PriorityRanking, prioritized_spanner_detailed, terminal_spanner_detailed
from .scaling import canonical_ranking
from .trees import STRATEGIES, TreeStrategy, light_tree


def _dump(obj: dict, stream=None) -> None:
    (stream or sys.stdout).write(json.dumps(obj, indent=2, sort_keys=True, default=float) + "\n")


def _ranking(spec: str, g) -> PriorityRanking:
    if spec == "identity":
        return PriorityRanking.identity(g.n)
    if spec == "canonical":
        return canonical_ranking(MetricSpace(distance_matrix(g)))
    return read_ranking(spec)


def cmd_gen(a) -> int:
    params = {}
    if a.kind == "grid":
        params = {"rows": a.rows, "cols": a.cols}
    elif a.kind == "er-weighted":
        params = {"n": a.n, "p": a.p}
    elif a.kind == "random-geometric":
        params = {"n": a.n, "radius": a.radius}
    else:
        params = {"n": a.n}
    g = generators(a.kind, seed=a.seed, **params)
    write_graph(a.output, g)
    return 0


def cmd_spanner(a) -> int:
    g = read_graph(a.input)
    if a.mode == "terminal":
        if not a.terminals:
            raise SystemExit("--mode terminal needs --terminals")
        rep = terminal_spanner_detailed(g, read_vertices(a.terminals), a.delta, verify=True)
        h, info = rep.spanner, {"lightness_bound": rep.lightness_bound}
    else:
        rep = prioritized_spanner_detailed(g, _ranking(a.ranking, g), a.rho, verify=True)
        h, info = rep.spanner, {"lightness": rep.lightness, "constant": rep.constant}
    write_subgraph(a.output, h)
    _dump({"status": "ok", "edges": len(h)} | info, sys.stderr)
    return 0


def cmd_tree(a) -> int:
    g = read_graph(a.input)
    if a.strategy == "plugin":
        if not a.tree:
            raise SystemExit("--strategy plugin needs --tree")
        sub = read_subgraph(a.tree, g)
        strat = TreeStrategy("plugin", edges=tuple((e.u, e.v, e.weight) for e in sub.edges()))
    else:
        strat = TreeStrategy(a.strategy)
    pi = "canonical" if a.ranking == "canonical" else _ranking(a.ranking, g)
    T, rep = light_tree(g, pi, a.rho, strat, measure=False)
    write_subgraph(a.output, T)
    _dump({"status": "ok", "lightness_tree": rep.lightness_tree,
           "lightness_spanner": rep.lightness_spanner}, sys.stderr)
    return 0


def cmd_analyze(a) -> int:
    g = read_graph(a.against)
    if g.n > MAX_EXACT_N:
        raise SystemExit(f"exact analysis is limited to n <= {MAX_EXACT_N}")
    h = read_subgraph(a.input, g)
    p = measure(g, h)
    csv_path = Path(a.prefix + ".csv")
    write_profile_csv(csv_path, p)
    verdicts = {}
    for q in (1, 2):
        lhs, rhs, ok = lemma21_check(p, q)
        verdicts[f"lq_from_scaling_q{q}"] = {"lhs": lhs, "rhs": rhs, "pass": ok}
    verdicts["non_contraction"] = {"min": float(p.distortion.min()) if p.pairs else 1.0,
                                   "pass": bool(p.pairs == 0 or p.distortion.min() >= 1 - 1e-9)}
    report = report_dict(g, h, p, csv_path.name, verdicts)
    write_report_json(a.prefix + ".json", report)
    _dump(report)
    return 0 if all(v["pass"] for v in verdicts.values()) else 1


def cmd_certify(a) -> int:
    result = certify.run(a.theorem, n=a.n, rho=a.rho, seed=a.seed)
    _dump({"status": "pass", "suite": a.theorem, "result": result})
    return 0


def cmd_verify_lb(a) -> int:
    g = read_graph(a.against)
    h = read_subgraph(a.input, g)
    _dump({"status": "pass", "verdict": verify_lower_bound(g, h, a.rho).as_dict()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lightspan", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a generated graph as an edge list")
    s.add_argument("kind", choices=sorted(GENERATORS))
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--rows", type=int, default=8)
    s.add_argument("--cols", type=int, default=8)
    s.add_argument("--p", type=float, default=0.1)
    s.add_argument("--radius", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", default="/dev/stdout")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("spanner", help="build a light spanner")
    s.add_argument("--input", required=True)
    s.add_argument("--mode", choices=("prioritized", "terminal"), default="prioritized")
    s.add_argument("--rho", type=float, default=0.5)
    s.add_argument("--ranking", default="identity", help="identity, canonical or a file")
    s.add_argument("--terminals")
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("-o", "--output", default="/dev/stdout")
    s.set_defaults(func=cmd_spanner)

    s = sub.add_parser("tree", help="build a light spanning tree")
    s.add_argument("--input", required=True)
    s.add_argument("--rho", type=float, default=0.5)
    s.add_argument("--strategy", choices=STRATEGIES, default="mst-of-spanner")
    s.add_argument("--tree")
    s.add_argument("--ranking", default="canonical")
    s.add_argument("-o", "--output", default="/dev/stdout")
    s.set_defaults(func=cmd_tree)

    s = sub.add_parser("analyze", help="measure a subgraph against its host graph")
    s.add_argument("--input", required=True)
    s.add_argument("--against", required=True)
    s.add_argument("--prefix", default="report")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("certify", help="run a certification suite")
    s.add_argument("--theorem", required=True, choices=certify.THEOREMS)
    s.add_argument("--n", type=int)
    s.add_argument("--rho", type=float)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify-lb", help="check the average-distortion lower bound")
    s.add_argument("--input", required=True)
    s.add_argument("--against", required=True)
    s.add_argument("--rho", type=float, required=True)
    s.set_defaults(func=cmd_verify_lb)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CertificationError as exc:
        _dump({"status": "fail"} | exc.to_dict(), sys.stderr)
        return 1
    except NotApplicable as exc:
        _dump({"status": "not-applicable", "reason": str(exc)}, sys.stderr)
        return 3
    except LightspanError as exc:
        _dump({"status": "error", "error": type(exc).__name__, "reason": str(exc)}, sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
