"""Shared fixtures: the standard counterexample graphs and random-graph helpers."""

import numpy as np
import pytest

from tribias.graphs import Multigraph


def counterexample_graph() -> Multigraph:
    """11-vertex tree-with-two-hubs whose triangle bias is -1/66."""
    edges_1b = [(1, 4), (2, 4), (3, 4), (4, 5), (5, 6), (5, 7), (6, 7),
                (7, 8), (8, 9), (8, 10), (8, 11)]
    return Multigraph(11, [(u - 1, v - 1) for u, v in edges_1b])


K5_EDGES = [(i, j) for i in range(5) for j in range(i + 1, 5)]


def clique_with_ear() -> Multigraph:
    """K5 plus a triangle sharing vertex 4; average triangle bias 13/21."""
    return Multigraph(7, K5_EDGES + [(4, 5), (5, 6), (6, 4)])


def clique_ear_plus_vertex_triangle() -> Multigraph:
    """Adds a second triangle at vertex 5 of the ear; average drops to 7/18."""
    return Multigraph(9, K5_EDGES + [(4, 5), (5, 6), (6, 4), (5, 7), (7, 8), (8, 5)])


def clique_ear_plus_edge_triangle() -> Multigraph:
    """Adds a triangle over the ear edge {5,6}; average drops to 7/24."""
    return Multigraph(8, K5_EDGES + [(4, 5), (5, 6), (6, 4), (5, 7), (6, 7)])


def four_glued_stars() -> Multigraph:
    """Four copies of (triangle + pendant edge at the hub) with all pendant
    tips merged into one vertex; average triangle bias -1/39."""
    edges = []
    for c in range(4):
        hub, a, b = 3 * c, 3 * c + 1, 3 * c + 2
        edges += [(hub, a), (hub, b), (a, b), (hub, 12)]
    return Multigraph(13, edges)


@pytest.fixture
def fig_counterexample():
    return counterexample_graph()


def random_simple_graph(rng: np.random.Generator, n: int, p: float) -> Multigraph:
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return Multigraph(n, list(zip(iu[mask].tolist(), ju[mask].tolist())))


def random_multigraph(rng: np.random.Generator, n: int, edges: int) -> Multigraph:
    out = []
    for _ in range(edges):
        u, v = (int(x) for x in rng.integers(0, n, 2))
        out.append((u, v, int(rng.integers(1, 4))))
    return Multigraph(n, out)


def is_connected(g: Multigraph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v, _ in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


def random_connected_graph(rng: np.random.Generator, n: int, p: float) -> Multigraph:
    while True:
        g = random_simple_graph(rng, n, p)
        if is_connected(g):
            return g
