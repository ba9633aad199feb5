"""Component-wise state-vector evolution.

Each placed component is lifted to the Fock operator on its own modes, one
photon-count block at a time, and applied to the sparse state vector.  Lifted
blocks are cached by (component matrix, local photon count), so circuits that
repeat a component pay for the lift once.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..circuit import Circuit, component_unitary, expanded_placements
from ..errors import CapabilityError
from ..fock import FockBasis, FockState, StateVector
from .naive import amplitude
from .distribution import Distribution

_LIFT_TINY = 1e-16


@lru_cache(maxsize=512)
def _lifted_block(mat_bytes: bytes, k: int, n_local: int) -> np.ndarray:
    """Fock-space matrix of a k-mode unitary on the n_local-photon sector."""
    mat = np.frombuffer(mat_bytes, dtype=complex).reshape(k, k)
    basis = FockBasis(k, n_local)
    states = [FockState(occ) for occ in basis.occupation_tuples]
    block = np.empty((basis.size, basis.size), dtype=complex)
    for t_idx, t in enumerate(states):
        for s_idx, s in enumerate(states):
            block[s_idx, t_idx] = amplitude(mat, t, s)
    return block


def apply_block(sv: StateVector, offset: int, mat: np.ndarray) -> StateVector:
    """Apply a k-mode unitary to the window [offset, offset+k) of ``sv``."""
    k = mat.shape[0]
    if offset < 0 or offset + k > sv.m:
        raise ValueError(f"block spans modes {offset}..{offset + k - 1}, "
                         f"state has {sv.m}")
    mat_bytes = np.ascontiguousarray(mat, dtype=complex).tobytes()
    out: dict[FockState, complex] = {}
    basis_cache: dict[int, FockBasis] = {}
    for state, amp in sv.items():
        occ = state.occupations
        local = occ[offset:offset + k]
        n_local = sum(local)
        basis = basis_cache.setdefault(n_local, FockBasis(k, n_local))
        block = _lifted_block(mat_bytes, k, n_local)
        column = block[:, basis.index(local)]
        for s_idx, s_local in enumerate(basis.occupation_tuples):
            coeff = column[s_idx]
            if abs(coeff) < _LIFT_TINY:
                continue
            new_state = FockState(occ[:offset] + s_local + occ[offset + k:])
            out[new_state] = out.get(new_state, 0j) + amp * coeff
    return StateVector(out, m=sv.m)


def _apply_permutation(sv: StateVector, offset: int, perm) -> StateVector:
    out: dict[FockState, complex] = {}
    k = len(perm)
    for state, amp in sv.items():
        occ = state.occupations
        local = occ[offset:offset + k]
        new_local = [0] * k
        for j, count in enumerate(local):
            new_local[perm[j]] = count
        new_state = FockState(occ[:offset] + tuple(new_local) + occ[offset + k:])
        out[new_state] = out.get(new_state, 0j) + amp
    return StateVector(out, m=sv.m)


def stepper_evolve(circuit: Circuit, sv: StateVector) -> StateVector:
    """Evolve a state vector through the circuit, component by component.

    Plain circuits take a state over the circuit's ``m`` modes.  Circuits
    with polarisation components take an already expanded state over ``2m``
    modes (see :func:`photonsim.fock.expand_polarization`).
    """
    if circuit.is_time_circuit:
        raise CapabilityError(
            "time circuits are simulated through the time-bin layer")
    if circuit.has_polarization:
        if sv.m != 2 * circuit.m:
            raise ValueError(
                "circuit has polarisation components: pass an expanded "
                f"state over {2 * circuit.m} modes, got {sv.m}")
        for offset, block in expanded_placements(circuit):
            sv = apply_block(sv, offset, block)
        return sv
    if sv.m != circuit.m:
        raise ValueError(f"state has {sv.m} modes, circuit {circuit.m}")
    for offset, comp in circuit.flatten():
        if comp.kind == "perm":
            sv = _apply_permutation(sv, offset, comp.param("perm"))
        else:
            sv = apply_block(sv, offset, component_unitary(comp))
    return sv


def stepper_full_distribution(circuit: Circuit,
                              input_state: FockState) -> Distribution:
    """Distribution of a basis input evolved through the circuit."""
    sv = stepper_evolve(circuit, StateVector.basis(input_state))
    return Distribution({s: (a * a.conjugate()).real for s, a in sv.items()})
