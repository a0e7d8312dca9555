import numpy as np
import pytest
from app.utils.grid_paths import MIN_EDGE_WEIGHT, grid_graph, path_lengths


def test_grid_graph_edge_count():
    graph = grid_graph(np.ones((3, 4)), 1.0)

    # 3 rows of 3 horizontal, 2 rows of 4 vertical, 2 x 3 of each diagonal
    assert graph.nnz == 9 + 8 + 6 + 6


def test_zero_cost_edges_are_kept():
    graph = grid_graph(np.zeros((2, 2)), 1.0)

    assert graph.nnz == 6
    assert np.all(graph.data == MIN_EDGE_WEIGHT)


def test_uniform_cost_from_a_corner():
    sources = np.zeros((5, 5), dtype=bool)
    sources[0, 0] = True

    distances = path_lengths(np.ones((5, 5)), sources, 0.5)

    assert distances[0, 0] == 0.0
    assert distances[0, 4] == pytest.approx(2.0, abs=1e-9)
    assert distances[4, 4] == pytest.approx(4 * 0.5 * np.sqrt(2.0), abs=1e-9)
    assert distances[4, 1] == pytest.approx(0.5 * (3 + np.sqrt(2.0)), abs=1e-9)


def test_nearest_source_wins():
    sources = np.zeros((1, 9), dtype=bool)
    sources[0, [0, 8]] = True

    distances = path_lengths(np.ones((1, 9)), sources, 1.0)

    np.testing.assert_allclose(distances[0], [0, 1, 2, 3, 4, 3, 2, 1, 0], atol=1e-9)


def test_costs_average_along_an_edge():
    cost = np.array([[0.0, 2.0, 4.0]])
    sources = np.array([[True, False, False]])

    distances = path_lengths(cost, sources, 1.0)

    np.testing.assert_allclose(distances[0], [0.0, 1.0, 4.0], atol=1e-9)
