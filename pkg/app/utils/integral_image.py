"""
Summed-area tables and clipped box sums.

A window centered on every pixel is summed in O(1) per pixel from a table
padded with a leading zero row and column, so the window can be clipped to
the image bounds without special cases.
"""

from typing import Tuple
import numpy as np


def integral_image(x: np.ndarray) -> np.ndarray:
    """
    Compute the zero-padded integral image of a 2-D array.

    Args:
        x: 2-D array; integer inputs are accumulated in int64.

    Returns:
        Array of shape (rows + 1, cols + 1) where entry [i, j] is the sum of x[:i, :j].
    """
    dtype = np.int64 if np.issubdtype(x.dtype, np.integer) else np.float64
    table = np.zeros((x.shape[0] + 1, x.shape[1] + 1), dtype=dtype)
    np.cumsum(np.cumsum(x, axis=0, dtype=dtype), axis=1, out=table[1:, 1:])
    return table


def window_bounds(
    centers: np.ndarray, half: int, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Clip [c - half, c + half] to [0, size - 1]; returns exclusive-stop bounds."""
    start = np.clip(centers - half, 0, size)
    stop = np.clip(centers + half + 1, 0, size)
    return start, stop


def box_sums(
    table: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    window: Tuple[int, int],
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sum an m x n window centered at every (row, col) pair of the grid.

    Args:
        table: integral image from `integral_image`.
        rows: 1-D array of center rows.
        cols: 1-D array of center columns.
        window: (m, n) odd window height and width.

    Returns:
        (sums, counts) of shape (len(rows), len(cols)); counts is the number of
        in-bounds pixels covered by each clipped window.
    """
    height, width = table.shape[0] - 1, table.shape[1] - 1
    r0, r1 = window_bounds(rows, window[0] // 2, height)
    c0, c1 = window_bounds(cols, window[1] // 2, width)

    sums = (
        table[np.ix_(r1, c1)]
        - table[np.ix_(r0, c1)]
        - table[np.ix_(r1, c0)]
        + table[np.ix_(r0, c0)]
    )
    counts = np.outer(r1 - r0, c1 - c0)
    return sums, counts
