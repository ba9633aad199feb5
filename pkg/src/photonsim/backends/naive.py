"""Permanent-based strong simulation: single amplitudes and, by enumeration,
full output distributions."""

from __future__ import annotations

import math

from ..fock import FockBasis, FockState
from ..linalg import as_matrix, submatrix_ts
from ..permanent import permanent
from .distribution import Distribution


def _check_plain(state: FockState, name: str) -> None:
    if state.annotated:
        raise ValueError(f"{name} state must be plain (no annotations); "
                         "use the annotated simulation path instead")


def amplitude(u, input_state: FockState, output_state: FockState,
              threads: int | None = None) -> complex:
    """<S| phi(U) |T> = Perm(U_{T,S}) / sqrt(prod s_i! prod t_j!).

    A photon-number mismatch between input and output is a contract error
    (linear optics conserves photon number), not amplitude zero.
    """
    _check_plain(input_state, "input")
    _check_plain(output_state, "output")
    sub = submatrix_ts(u, input_state, output_state)
    norm = 1.0
    for c in input_state.occupations:
        norm *= math.factorial(c)
    for c in output_state.occupations:
        norm *= math.factorial(c)
    return permanent(sub, threads=threads) / math.sqrt(norm)


def probability(u, input_state: FockState, output_state: FockState,
                threads: int | None = None) -> float:
    a = amplitude(u, input_state, output_state, threads=threads)
    return (a * a.conjugate()).real


def naive_full_distribution(u, input_state: FockState,
                            threads: int | None = None) -> Distribution:
    """Full output distribution by one permanent per outcome."""
    _check_plain(input_state, "input")
    mat = as_matrix(u)
    basis = FockBasis(mat.shape[0], input_state.n)
    probs = {s: probability(mat, input_state, s, threads=threads)
             for s in basis}
    return Distribution(probs)
