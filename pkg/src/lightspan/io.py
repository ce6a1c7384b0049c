"""Text formats: edge lists (``n m`` header, ``u v w`` lines, ``#`` comments),
rankings (one vertex per line) and distance matrices (``n`` then n rows)."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import InvalidInput
from .graph import Graph, Subgraph, build_graph
from .prioritized import PriorityRanking

PathLike = str | Path


def _lines(fh: TextIO) -> Iterator[list[str]]:
    for raw in fh:
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def read_edge_triples(path: PathLike) -> tuple[int, list[tuple[int, int, float]]]:
    with open(path) as fh:
        rows = _lines(fh)
        try:
            head = next(rows)
        except StopIteration:
            raise InvalidInput(f"{path}: empty edge list") from None
        if len(head) != 2:
            raise InvalidInput(f"{path}: header must be 'n m'")
        n, m = int(head[0]), int(head[1])
        edges = []
        for row in rows:
            if len(row) != 3:
                raise InvalidInput(f"{path}: expected 'u v w', got {' '.join(row)!r}")
            edges.append((int(row[0]), int(row[1]), float(row[2])))
    if len(edges) != m:
        raise InvalidInput(f"{path}: header announces {m} edges, found {len(edges)}")
    return n, edges


def read_graph(path: PathLike) -> Graph:
    n, edges = read_edge_triples(path)
    return build_graph(n, edges)


def format_edges(n: int, edges: Iterable[tuple[int, int, float]]) -> str:
    edges = list(edges)
    out = [f"{n} {len(edges)}"]
    out += [f"{u} {v} {float(w)!r}" for u, v, w in edges]
    return "\n".join(out) + "\n"


def write_graph(path: PathLike, g: Graph) -> None:
    Path(path).write_text(format_edges(g.n, zip(g.u.tolist(), g.v.tolist(), g.w.tolist())))


def write_subgraph(path: PathLike, h: Subgraph) -> None:
    """Edges in increasing parent-id order, so output is reproducible."""
    Path(path).write_text(format_edges(h.n, ((e.u, e.v, e.weight) for e in h.edges())))


def read_subgraph(path: PathLike, g: Graph) -> Subgraph:
    """Subgraph of ``g`` from an edge-list file; every edge must exist in ``g``."""
    n, edges = read_edge_triples(path)
    if n != g.n:
        raise InvalidInput(f"{path}: {n} vertices, graph has {g.n}")
    ids = []
    for u, v, _ in edges:
        try:
            ids.append(g.edge_id(u, v))
        except KeyError:
            raise InvalidInput(f"{path}: ({u}, {v}) is not an edge of the graph") from None
    return Subgraph(g, ids)


def read_ranking(path: PathLike) -> PriorityRanking:
    with open(path) as fh:
        return PriorityRanking(int(row[0]) for row in _lines(fh))


def write_ranking(path: PathLike, pi: PriorityRanking) -> None:
    Path(path).write_text("".join(f"{v}\n" for v in pi.order))


def read_vertices(path: PathLike) -> list[int]:
    with open(path) as fh:
        return [int(x) for row in _lines(fh) for x in row]


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path) as fh:
        rows = list(_lines(fh))
    if not rows or len(rows[0]) != 1:
        raise InvalidInput(f"{path}: first line must hold n")
    n = int(rows[0][0])
    D = np.array([[float(x) for x in r] for r in rows[1:]], dtype=np.float64)
    if D.shape != (n, n):
        raise InvalidInput(f"{path}: expected a {n}x{n} matrix, got shape {D.shape}")
    return D


def write_matrix(path: PathLike, D: np.ndarray) -> None:
    lines = [str(D.shape[0])] + [" ".join(repr(float(x)) for x in row) for row in D]
    Path(path).write_text("\n".join(lines) + "\n")
