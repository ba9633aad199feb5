"""Strong simulation of the full output state by photon-by-photon expansion.

Layer ``k`` holds the amplitudes of every k-photon state; injecting photon
``k+1`` from input mode ``q`` maps layer ``k`` to ``k+1`` through the column
``U[:, q]`` and the creation-operator factors ``sqrt(s_i + 1)``.  Time cost
O(n * fock_dim(m, n)); the whole path is kept in memory, so a budget guards
allocation.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import CapacityError
from ..fock import FockBasis, FockState, StateVector, fock_dim
from ..linalg import as_matrix
from .distribution import Distribution

#: default in-memory budget (bytes) for the unfolded amplitude layers
DEFAULT_MEMORY_BUDGET = 4 << 30


@lru_cache(maxsize=128)
def _layer_maps(m: int, k: int):
    """Index/factor arrays mapping layer k to layer k+1.

    For each mode ``i``: ``targets[i][j]`` is the rank of basis-state ``j``
    of layer ``k`` with one photon added on mode ``i``, and ``factors[i][j]``
    the matching sqrt(occupation + 1).
    """
    src = FockBasis(m, k)
    dst = FockBasis(m, k + 1)
    dim = src.size
    targets = np.empty((m, dim), dtype=np.intp)
    factors = np.empty((m, dim), dtype=float)
    for j, occ in enumerate(src.occupation_tuples):
        for i in range(m):
            bumped = occ[:i] + (occ[i] + 1,) + occ[i + 1:]
            targets[i, j] = dst.index(bumped)
            factors[i, j] = math.sqrt(occ[i] + 1)
    return targets, factors


def estimate_memory(m: int, n: int) -> int:
    """Rough byte estimate of the unfolded computation path."""
    total = 0
    for k in range(n + 1):
        dim = fock_dim(m, k)
        total += dim * 16          # complex amplitudes
        if k < n:
            total += 2 * m * dim * 8   # transition indices and factors
    return total


def slos_amplitude_array(u, input_state: FockState,
                         memory_budget: int | None = None
                         ) -> tuple[FockBasis, np.ndarray]:
    """All output amplitudes of ``input_state`` through ``u``, basis-ordered."""
    if input_state.annotated:
        raise ValueError("full-path expansion takes a plain input state")
    mat = as_matrix(u)
    m = mat.shape[0]
    if input_state.m != m:
        raise ValueError(f"state has {input_state.m} modes, matrix is {m}x{m}")
    n = input_state.n
    budget = DEFAULT_MEMORY_BUDGET if memory_budget is None else memory_budget
    need = estimate_memory(m, n)
    if need > budget:
        raise CapacityError(
            f"unfolding {n} photons over {m} modes needs ~{need:,} bytes, "
            f"budget is {budget:,}")
    amps = np.ones(1, dtype=complex)
    for k, q in enumerate(input_state.photon_modes()):
        targets, factors = _layer_maps(m, k)
        nxt = np.zeros(fock_dim(m, k + 1), dtype=complex)
        column = mat[:, q]
        for i in range(m):
            # target ranks are distinct for fixed i, so fancy += is safe
            nxt[targets[i]] += amps * (column[i] * factors[i])
        amps = nxt
    norm = 1.0
    for c in input_state.occupations:
        norm *= math.factorial(c)
    amps /= math.sqrt(norm)
    return FockBasis(m, n), amps


def slos_amplitudes(u, input_state: FockState,
                    memory_budget: int | None = None) -> StateVector:
    basis, amps = slos_amplitude_array(u, input_state, memory_budget)
    return StateVector({FockState(occ): amp for occ, amp in
                        zip(basis.occupation_tuples, amps)})


def slos_full_distribution(u, input_state: FockState,
                           memory_budget: int | None = None) -> Distribution:
    basis, amps = slos_amplitude_array(u, input_state, memory_budget)
    probs = np.real(amps * amps.conjugate())
    return Distribution({FockState(occ): p for occ, p in
                         zip(basis.occupation_tuples, probs)})
