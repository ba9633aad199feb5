"""Vectorized numpy fallback for the permanent kernels.

Used when the compiled extension is unavailable (or disabled via the
``PHOTONSIM_PURE_PYTHON`` environment variable).  Same results, same
deterministic summation layout over the fixed chunk grid, just slower.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 14  # delta/subset vectors processed per numpy batch


def glynn(a: np.ndarray) -> complex:
    """Glynn +-1 formula, Perm(A) = 2^{1-n} sum_delta prod_j (delta . A_j)."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(a[0, 0])
    total = 0j
    # delta_0 is pinned to +1; enumerate the remaining n-1 signs in binary
    # order (order differs from the Gray-code native kernel only in float
    # rounding, covered by the cross-kernel tolerance).
    count = 1 << (n - 1)
    bit_cols = np.arange(n - 1, dtype=np.uint64)
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count), dtype=np.uint64)
        bits = (idx[:, None] >> bit_cols[None, :]) & 1
        deltas = np.empty((len(idx), n))
        deltas[:, 0] = 1.0
        deltas[:, 1:] = 1.0 - 2.0 * bits
        signs = 1.0 - 2.0 * (bits.sum(axis=1) & 1)
        colsums = deltas @ a
        total += (signs * np.prod(colsums, axis=1)).sum()
    return total * 2.0 ** (1 - n)


def _gray(k: np.ndarray) -> np.ndarray:
    return k ^ (k >> 1)


def ryser_range(a: np.ndarray, start: int, stop: int) -> complex:
    """Signed Ryser partial sum over Gray-code subset indices [start, stop).

    Index ``k`` maps to the column subset ``gray(k)``; summing every chunk of
    the fixed grid in order reproduces the full permanent.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    total = 0j
    for lo in range(start, stop, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.uint64)
        subsets = _gray(idx)
        bits = ((subsets[:, None] >> np.arange(n, dtype=np.uint64)[None, :])
                & 1).astype(float)
        sizes = bits.sum(axis=1).astype(np.int64)
        rowsums = bits @ a.T  # (chunk, n): row i sums over selected columns
        signs = np.where((n - sizes) & 1, -1.0, 1.0)
        total += (signs * np.prod(rowsums, axis=1)).sum()
    return total


def subpermanents(b: np.ndarray) -> np.ndarray:
    """All k leave-one-column-out permanents of a (k-1) x k matrix at once.

    ``out[j] = Perm(b with column j removed)``; the workhorse of the
    sequential boson sampler (Laplace expansion along the candidate row).
    """
    b = np.asarray(b, dtype=complex)
    rows, k = b.shape
    if rows != k - 1:
        raise ValueError(f"expected (k-1) x k matrix, got {b.shape}")
    if k == 1:
        return np.array([1.0 + 0j])
    out = np.zeros(k, dtype=complex)
    count = 1 << (rows - 1)
    bit_cols = np.arange(rows - 1, dtype=np.uint64)
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count), dtype=np.uint64)
        bits = (idx[:, None] >> bit_cols[None, :]) & 1
        deltas = np.empty((len(idx), rows))
        deltas[:, 0] = 1.0
        deltas[:, 1:] = 1.0 - 2.0 * bits
        signs = 1.0 - 2.0 * (bits.sum(axis=1) & 1)
        colsums = deltas @ b  # (chunk, k)
        # product over all columns but one, via prefix/suffix products
        prefix = np.ones_like(colsums)
        suffix = np.ones_like(colsums)
        np.cumprod(colsums[:, :-1], axis=1, out=prefix[:, 1:])
        np.cumprod(colsums[:, :0:-1], axis=1, out=suffix[:, -2::-1])
        out += (signs[:, None] * prefix * suffix).sum(axis=0)
    return out * 2.0 ** (1 - rows)
