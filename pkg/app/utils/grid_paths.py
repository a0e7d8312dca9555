"""
Minimal path costs over the pixel grid.

Pixels are graph nodes joined to their 8 neighbours; an edge costs the
mean of its two endpoint costs times its length. Shortest distances from a
set of source pixels integrate a slope field into a height field.
"""

from typing import Tuple
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

# csgraph treats explicit zeros as missing edges
MIN_EDGE_WEIGHT = 1e-12

NEIGHBOUR_OFFSETS: Tuple[Tuple[int, int, float], ...] = (
    (0, 1, 1.0),
    (1, 0, 1.0),
    (1, 1, float(np.sqrt(2.0))),
    (1, -1, float(np.sqrt(2.0))),
)


def grid_graph(cost: np.ndarray, spacing: float) -> coo_matrix:
    """Build the undirected 8-neighbour graph of a 2-D cost field (upper triangle only)."""
    height, width = cost.shape
    index = np.arange(height * width).reshape(height, width)
    sources, targets, weights = [], [], []
    for dv, du, length in NEIGHBOUR_OFFSETS:
        v0, v1 = 0, height - dv
        u0, u1 = max(0, -du), width - max(0, du)
        a = index[v0:v1, u0:u1]
        b = index[v0 + dv : v1 + dv, u0 + du : u1 + du]
        mean_cost = 0.5 * (cost[v0:v1, u0:u1] + cost[v0 + dv : v1 + dv, u0 + du : u1 + du])
        sources.append(a.ravel())
        targets.append(b.ravel())
        weights.append((spacing * length * mean_cost + MIN_EDGE_WEIGHT).ravel())
    size = height * width
    return coo_matrix(
        (np.concatenate(weights), (np.concatenate(sources), np.concatenate(targets))),
        shape=(size, size),
    )


def path_lengths(cost: np.ndarray, sources: np.ndarray, spacing: float) -> np.ndarray:
    """
    Shortest accumulated cost from any source pixel to every pixel.

    Args:
        cost: non-negative per-pixel cost, shape (height, width).
        sources: boolean mask of source pixels; at least one must be set.
        spacing: physical length of one pixel step.

    Returns:
        Distance field of the same shape, exactly 0 at the sources.
    """
    graph = grid_graph(cost, spacing).tocsr()
    start = np.flatnonzero(sources)
    distances = dijkstra(graph, directed=False, indices=start, min_only=True)
    distances = distances.reshape(cost.shape)
    distances[sources] = 0.0
    return distances
