"""Undirected communication topology with an oriented incidence matrix.

Nodes are 1-based ids.  Edges keep their input order and orientation
(tail = first listed node), which fixes the incidence-matrix signs; the
controller and Lyapunov values are orientation-independent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Graph",
    "from_edges",
    "incidence_matrix",
    "is_connected",
    "neighbors",
    "degree",
]


@dataclass(frozen=True)
class Graph:
    """Undirected graph with ordered, oriented edges over nodes 1..n."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        seen = set()
        normalized = []
        for edge in self.edges:
            if len(edge) != 2:
                raise ValueError(f"edge {edge!r} is not a pair")
            i, j = int(edge[0]), int(edge[1])
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i}, {j}) uses node ids outside 1..{self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate undirected edge ({i}, {j})")
            seen.add(key)
            normalized.append((i, j))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)


def from_edges(n: int, edges) -> Graph:
    """Build a graph from a node count and (tail, head) pairs."""
    return Graph(int(n), tuple(tuple(e) for e in edges))


def incidence_matrix(g: Graph) -> np.ndarray:
    """Oriented incidence matrix: +1 at the tail of each edge, -1 at the head."""
    b = np.zeros((g.n, g.m))
    for k, (i, j) in enumerate(g.edges):
        b[i - 1, k] = 1.0
        b[j - 1, k] = -1.0
    return b


def _adjacency_sets(g: Graph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for i, j in g.edges:
        adj[i - 1].add(j - 1)
        adj[j - 1].add(i - 1)
    return adj


def is_connected(g: Graph) -> bool:
    """True iff every node is reachable from node 1."""
    adj = _adjacency_sets(g)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n


def neighbors(g: Graph, i: int) -> list[int]:
    """Sorted neighbor ids of node ``i``, ignoring edge orientation."""
    if not (1 <= i <= g.n):
        raise ValueError(f"node id {i} outside 1..{g.n}")
    return sorted(v + 1 for v in _adjacency_sets(g)[i - 1])


def degree(g: Graph, i: int) -> int:
    return len(neighbors(g, i))
