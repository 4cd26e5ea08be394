"""Exact integer matrix helpers.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so products
never overflow and zero-sized shapes like ``(0, 3)`` behave.
"""
from __future__ import annotations

import numpy as np


def int_matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    if shape is not None:
        r, c = shape
        flat = [int(x) for row in rows for x in (row if hasattr(row, "__iter__") else [row])]
        if len(flat) != r * c:
            raise ValueError(f"expected {r * c} entries for shape {shape}, got {len(flat)}")
        out = np.empty((r, c), dtype=object)
        for k, val in enumerate(flat):
            out[k // c, k % c] = val
        return out
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def zeros(r: int, c: int) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot compose {a.shape} with {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = zeros(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def rank(mat: np.ndarray) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return 0
    m = [[int(x) for x in row] for row in mat]
    r = 0
    prev = 1
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        for i in range(r + 1, rows):
            mi = m[i]
            f = mi[c]
            mr = m[r]
            for j in range(c + 1, cols):
                # exact division is guaranteed by Sylvester's identity
                mi[j] = (p * mi[j] - f * mr[j]) // prev
            mi[c] = 0
        prev = p
        r += 1
        if r == rows:
            break
    return r
