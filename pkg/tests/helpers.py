"""Shared builders used by several test modules."""

import numpy as np

from hullmert import Edge, Hypergraph


def make_line_graph(lines: list[tuple[float, float]]) -> Hypergraph:
    """Nullary edge per (slope, intercept) line; with LINE_W0/LINE_V the
    edge for line i projects to the dual point (slope_i, -intercept_i)."""
    edges = [
        Edge.make(0, (), {0: m, 1: b}, (f"h{i}",)) for i, (m, b) in enumerate(lines)
    ]
    return Hypergraph(1, edges, goal=0, n_features=2)


LINE_W0 = np.array([0.0, 1.0])
LINE_V = np.array([1.0, 0.0])
