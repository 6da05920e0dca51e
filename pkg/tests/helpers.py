"""Shared generators and independent oracles for the test suite."""

import math

import numpy as np

from attsync import Graph, from_edges


def fig_topology() -> Graph:
    """The five-node benchmark topology used by the shipped scenarios."""
    return from_edges(5, [(1, 2), (2, 3), (2, 4), (3, 4), (4, 5)])


def random_rotation_vectors(rng, count, max_norm):
    """Uniform directions with radii uniform in [0, max_norm)."""
    dirs = rng.normal(size=(count, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return dirs * (max_norm * rng.uniform(size=(count, 1)))


def sample_initial_state(n, seed, sum_sq_norm):
    """Seeded network state with an exact total squared norm.

    Mirrors the scenario generator: per-agent uniform draw in the ball of
    radius pi/2, then one global rescale.
    """
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(n, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = 0.5 * math.pi * rng.uniform(size=n) ** (1.0 / 3.0)
    states = dirs * radii[:, None]
    states *= math.sqrt(sum_sq_norm / float((states * states).sum()))
    return states


def random_connected_graph(rng, max_nodes=8, edge_probability=0.4) -> Graph:
    """Random undirected graph, resampled until connected."""
    while True:
        n = int(rng.integers(2, max_nodes + 1))
        edges = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
            if rng.uniform() < edge_probability
        ]
        g = from_edges(n, edges)
        if reachable_count(g) == n:
            return g


def random_graph(rng, max_nodes=8, edge_probability=0.4) -> Graph:
    n = int(rng.integers(1, max_nodes + 1))
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.uniform() < edge_probability
    ]
    return from_edges(n, edges)


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=bool)
    for i, j in g.edges:
        a[i - 1, j - 1] = True
        a[j - 1, i - 1] = True
    return a


def reachability_matrix(g: Graph) -> np.ndarray:
    """Transitive closure via boolean matrix powers (independent oracle)."""
    reach = adjacency_matrix(g) | np.eye(g.n, dtype=bool)
    for _ in range(g.n):
        reach = reach | (reach @ reach)
    return reach


def reachable_count(g: Graph) -> int:
    return int(reachability_matrix(g)[0].sum())


def component_count(g: Graph) -> int:
    reach = reachability_matrix(g)
    seen: set[int] = set()
    components = 0
    for i in range(g.n):
        if i not in seen:
            components += 1
            seen.update(np.flatnonzero(reach[i]).tolist())
    return components
