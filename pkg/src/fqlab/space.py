"""Canonical lexicographic encoding of points in F_q^n.

Point index = sum_i x_i * q^(n-1-i), so the first coordinate varies slowest,
matching ``itertools.product(range(q), repeat=n)``.
"""

from __future__ import annotations

import numpy as np


def all_points(q: int, n: int) -> np.ndarray:
    """Array of shape (q**n, n) listing F_q^n in canonical order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((q,) * n, dtype=np.int64)
    return grids.reshape(n, -1).T.copy()


def point_index(points, q: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    n = pts.shape[-1]
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return pts @ weights


def index_to_point(idx, q: int, n: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // weights) % q


def as_point_array(points, n: int | None = None) -> np.ndarray:
    """Coerce a sequence of points to an int64 array of shape (m, n)."""
    arr = np.asarray(points, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, n or 0), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if n is not None and arr.shape[1] != n:
        raise ValueError(f"expected points of dimension {n}, got {arr.shape[1]}")
    return arr
