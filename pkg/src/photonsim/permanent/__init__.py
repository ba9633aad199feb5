"""Matrix permanents with compiled kernels and a numpy fallback.

``permanent`` routes between three paths:

* exact big-integer Ryser for small integral matrices (so Perm of a 0/1 or
  all-ones matrix is exact, not merely close),
* single-threaded Gray-code Glynn below ``GLYNN_CUTOFF``,
* chunked Gray-code Ryser above it, fanned out over a thread pool.

The Ryser chunk grid depends only on the matrix size, and chunk partials are
reduced in grid order, so results are bit-identical for any thread count.
Set ``PHOTONSIM_PURE_PYTHON=1`` to force the numpy fallback.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import reference

if os.environ.get("PHOTONSIM_PURE_PYTHON"):
    _impl = reference
    KERNEL_BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
        KERNEL_BACKEND = "native"
    except ImportError:
        _impl = reference
        KERNEL_BACKEND = "python"

#: below this size permanent() uses single-threaded Glynn, above it Ryser
GLYNN_CUTOFF = 12

#: fixed Ryser chunk-grid size for n >= GLYNN_CUTOFF (independent of threads)
RYSER_CHUNKS = 64

#: magnitude bound for the exact-integer fast path
_INT_EXACT_MAX_N = 16
_INT_EXACT_MAX_ENTRY = 1 << 30


def kernel_backend() -> str:
    """Which kernel implementation is active: ``native`` or ``python``."""
    return KERNEL_BACKEND


def default_threads() -> int:
    return min(4, os.cpu_count() or 1)


def _as_square(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got {arr.shape}")
    return arr


def _ryser_grid(n: int) -> list[tuple[int, int]]:
    total = (1 << n)  # subset indices 1 .. 2^n - 1
    if n < GLYNN_CUTOFF:
        return [(1, total)]
    chunks = min(RYSER_CHUNKS, total - 1)
    bounds = [1 + ((total - 1) * i) // chunks for i in range(chunks + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(chunks)
            if bounds[i] < bounds[i + 1]]


def permanent_glynn(a) -> complex:
    """Glynn kernel; deterministic single-threaded summation order."""
    arr = _as_square(a)
    return complex(_impl.glynn(arr))


def permanent_ryser(a, threads: int | None = None) -> complex:
    """Ryser kernel over the fixed Gray-code chunk grid.

    ``threads`` workers map chunks; partials are combined in grid order, so
    the value does not depend on the worker count.
    """
    arr = _as_square(a)
    n = arr.shape[0]
    if n == 0:
        return 1.0 + 0j
    grid = _ryser_grid(n)
    threads = default_threads() if threads is None else max(1, threads)
    if threads == 1 or len(grid) == 1:
        parts = [_impl.ryser_range(arr, lo, hi) for lo, hi in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda span: _impl.ryser_range(arr, span[0], span[1]), grid))
    total = 0j
    for p in parts:
        total += p
    return complex(total)


def _integral_entries(arr: np.ndarray) -> np.ndarray | None:
    if arr.shape[0] > _INT_EXACT_MAX_N:
        return None
    if np.abs(arr.imag).max(initial=0.0) != 0.0:
        return None
    re = arr.real
    rounded = np.round(re)
    if not (re == rounded).all() or np.abs(rounded).max(initial=0.0) > _INT_EXACT_MAX_ENTRY:
        return None
    return rounded.astype(object)


def _permanent_int_exact(rows: np.ndarray) -> int:
    """Ryser with Python integers: exact for integral matrices."""
    n = rows.shape[0]
    a = [[int(x) for x in row] for row in rows]
    rowsums = [0] * n
    g = 0
    size_par = 0
    n_par = n & 1
    total = 0
    for k in range(1, 1 << n):
        b = (k & -k).bit_length() - 1
        g ^= 1 << b
        if (g >> b) & 1:
            for i in range(n):
                rowsums[i] += a[i][b]
        else:
            for i in range(n):
                rowsums[i] -= a[i][b]
        size_par ^= 1
        prod = 1
        for i in range(n):
            prod *= rowsums[i]
        total += prod if (n_par ^ size_par) == 0 else -prod
    return total


def permanent(a, threads: int | None = None) -> complex:
    """Permanent of a square complex matrix.

    Dispatches between the Glynn and Ryser kernels by size (integral
    matrices small enough take an exact big-integer route instead).
    """
    arr = _as_square(a)
    n = arr.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(arr[0, 0])
    integral = _integral_entries(arr)
    if integral is not None:
        return complex(_permanent_int_exact(integral))
    if n < GLYNN_CUTOFF:
        return permanent_glynn(arr)
    return permanent_ryser(arr, threads=threads)


def leave_one_out_permanents(b) -> np.ndarray:
    """Permanents of all k column-deleted minors of a (k-1) x k matrix."""
    arr = np.ascontiguousarray(b, dtype=complex)
    return np.asarray(_impl.subpermanents(arr))


def permanent_of_ones(n: int) -> int:
    """Perm(J_n) = n!, exact; convenience used in tests and benchmarks."""
    return math.factorial(n)
