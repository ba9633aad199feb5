"""Exact weak simulation: sequential-mode-assignment sampling.

Implements the chain sampler of Clifford & Clifford: permute the input
photons uniformly, then assign output modes one photon at a time, each
conditional computed from the leave-one-column-out permanents of the rows
chosen so far.  Cost per sample O(n 2^n + m n^2); memory O(m n).

Small photon numbers are drawn in vectorized batches (the whole Glynn sweep
fits in a handful of array passes); larger ones fall back to one compiled
sweep per photon.  Both paths are deterministic for a given seed.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from ..fock import FockState
from ..linalg import as_matrix
from ..permanent import leave_one_out_permanents
from .distribution import SampleRecord

#: a conditional mass below this aborts the draw instead of sampling noise
_MASS_FLOOR = 1e-300

#: photon count up to which samples are drawn in vectorized batches
_BATCH_MAX_PHOTONS = 8

_BATCH_SIZE = 8192


def _weighted_rows(weights: np.ndarray, u: np.ndarray) -> np.ndarray:
    """One categorical draw per row of ``weights`` given uniforms ``u``."""
    cdf = np.cumsum(weights, axis=1)
    total = cdf[:, -1]
    if not np.isfinite(total).all() or (total < _MASS_FLOOR).any():
        raise NumericError("conditional probability mass underflow in sampler")
    picks = (cdf < (u * total)[:, None]).sum(axis=1)
    return np.minimum(picks, weights.shape[1] - 1)


def _batch_draw(columns: np.ndarray, count: int, rng) -> np.ndarray:
    """Draw ``count`` samples at once; returns chosen rows (count, n)."""
    m, n = columns.shape
    orders = np.argsort(rng.random((count, n)), axis=1)
    cols = columns.T[orders].transpose(0, 2, 1)  # (count, m, n)
    rows = np.empty((count, n), dtype=np.intp)
    for k in range(1, n + 1):
        if k == 1:
            minors = np.ones((count, 1), dtype=complex)
        else:
            chosen = np.take_along_axis(
                cols[:, :, :k], rows[:, :k - 1, None], axis=1)  # (count,k-1,k)
            minors = np.zeros((count, k), dtype=complex)
            shared = k - 1
            for pattern in range(1 << (shared - 1)):
                delta = np.empty(shared)
                delta[0] = 1.0
                for bit in range(shared - 1):
                    delta[bit + 1] = 1.0 - 2.0 * ((pattern >> bit) & 1)
                sign = float(np.prod(delta))
                colsums = np.einsum("i,sij->sj", delta, chosen)
                prefix = np.ones_like(colsums)
                suffix = np.ones_like(colsums)
                np.cumprod(colsums[:, :-1], axis=1, out=prefix[:, 1:])
                np.cumprod(colsums[:, :0:-1], axis=1, out=suffix[:, -2::-1])
                minors += sign * prefix * suffix
            minors *= 2.0 ** (1 - shared)
        amps = np.einsum("smj,sj->sm", cols[:, :, :k], minors)
        weights = np.real(amps * amps.conjugate())
        rows[:, k - 1] = _weighted_rows(weights, rng.random(count))
    return rows


def _single_draw(columns: np.ndarray, rng) -> np.ndarray:
    m, n = columns.shape
    cols = columns[:, rng.permutation(n)]
    rows: list[int] = []
    for k in range(1, n + 1):
        minors = leave_one_out_permanents(cols[rows, :k])
        amps = cols[:, :k] @ minors
        weights = np.real(amps * amps.conjugate())
        rows.append(int(_weighted_rows(weights[None, :], rng.random(1))[0]))
    return np.asarray(rows)


def sample_cc2017(u, input_state: FockState, count: int,
                  seed: int | None = None) -> SampleRecord:
    """Draw ``count`` i.i.d. exact samples of the output distribution.

    Deterministic for a given seed; the record stores the seed so any run
    can be reproduced.
    """
    if input_state.annotated:
        raise ValueError("the sampler takes a plain input state")
    mat = as_matrix(u)
    m = mat.shape[0]
    if input_state.m != m:
        raise ValueError(f"state has {input_state.m} modes, matrix is {m}x{m}")
    n = input_state.n
    rng = np.random.default_rng(seed)
    if n == 0:
        return SampleRecord([input_state] * count, seed)
    columns = np.ascontiguousarray(mat[:, input_state.photon_modes()])
    outcomes: list[FockState] = []
    if n <= _BATCH_MAX_PHOTONS:
        done = 0
        while done < count:
            chunk = min(_BATCH_SIZE, count - done)
            rows = _batch_draw(columns, chunk, rng)
            for sample_rows in rows:
                outcomes.append(FockState(np.bincount(sample_rows,
                                                      minlength=m)))
            done += chunk
    else:
        for _ in range(count):
            rows = _single_draw(columns, rng)
            outcomes.append(FockState(np.bincount(rows, minlength=m)))
    return SampleRecord(outcomes, seed)
