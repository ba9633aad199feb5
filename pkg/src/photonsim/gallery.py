"""Ready-made experiment circuits: the post-selected CNOT, the two-photon
interference (delay-line) setup, a compiled two-qubit search circuit on
spatial+polarisation encoding, a 12-mode order-finding circuit, and the
6-mode variational ansatz.
"""

from __future__ import annotations

import math

import numpy as np

from .analysis import CountRule, LogicalEncoding
from .circuit import (Circuit, beam_splitter, mode_permutation, phase_shifter,
                      time_delay, wave_plate)
from .fock import FockState, parse_state

_PI = math.pi


def _bs_h():
    # default phases make BS(R=1/2) the exact Hadamard [[1,1],[1,-1]]/sqrt(2)
    return beam_splitter(R=1 / 2)


def _bs_cz():
    # diagonal sqrt(1/3), two-photon (1,1)->(1,1) permanent -1/3
    return beam_splitter(R=2 / 3, phi_b=_PI, phi_d=0.0)


# ---------------------------------------------------------------------------
# post-selected CNOT (dual-rail control on modes 1,2; target on 3,4)
# ---------------------------------------------------------------------------

def ralph_cnot() -> Circuit:
    """Six-mode post-selected CNOT; aux modes 0 and 5, success 1/9."""
    return (Circuit(6, name="Ralph CNOT")
            .add(0, _bs_cz())
            .add(3, _bs_h())
            .add(2, _bs_cz())
            .add(4, beam_splitter(R=2 / 3))
            .add(3, _bs_h()))


def cnot_states() -> dict[str, FockState]:
    return {
        "00": parse_state("|0,1,0,1,0,0>"),
        "01": parse_state("|0,1,0,0,1,0>"),
        "10": parse_state("|0,0,1,1,0,0>"),
        "11": parse_state("|0,0,1,0,1,0>"),
    }


CNOT_EXPECTED = {"00": "00", "01": "01", "10": "11", "11": "10"}

#: keep exactly one photon per encoded qubit
CNOT_RULE = CountRule([(range(1, 3), 1), (range(3, 5), 1)])

CNOT_ENCODING = LogicalEncoding.dual_rail([(1, 2), (3, 4)])


# ---------------------------------------------------------------------------
# two-photon interference with a delay line
# ---------------------------------------------------------------------------

def hom_circuit() -> Circuit:
    """Balanced splitter, one-period delay on the lower arm, recombiner."""
    return (Circuit(2, name="HOM")
            .add(0, beam_splitter(theta=_PI / 4))
            .add(1, time_delay(1))
            .add(0, beam_splitter(theta=_PI / 4)))


# ---------------------------------------------------------------------------
# factoring circuit (N=15, a=2): 12 modes, two post-selected CZ gates
# ---------------------------------------------------------------------------

def _add_cz(circuit: Circuit, qubit_a: tuple[int, int],
            qubit_b: tuple[int, int], aux: tuple[int, int]) -> Circuit:
    """Post-selected CZ between two dual-rail qubits anywhere in the circuit.

    Routes the six involved modes into a contiguous window with a mode
    permutation, applies the three-splitter core, and routes back."""
    a0, a1 = qubit_a
    b0, b1 = qubit_b
    u, v = aux
    window = [u, a0, a1, b1, b0, v]
    if len(set(window)) != 6:
        raise ValueError("CZ needs six distinct modes")
    m = circuit.m
    perm = [None] * m
    for slot, mode in enumerate(window):
        perm[mode] = slot
    rest = iter(range(6, m))
    for mode in range(m):
        if perm[mode] is None:
            perm[mode] = next(rest)
    inverse = [0] * m
    for src, dst in enumerate(perm):
        inverse[dst] = src
    circuit.add(0, mode_permutation(perm))
    circuit.add(0, _bs_cz())
    circuit.add(2, _bs_cz())
    circuit.add(4, _bs_cz())
    circuit.add(0, mode_permutation(inverse))
    return circuit


def shor_circuit() -> Circuit:
    """Order-finding circuit for N=15, a=2 on path-encoded qubits.

    Modes (1,2), (3,4), (7,8), (9,10) carry qubits x1, x2, f1, f2; modes
    0, 5, 6, 11 are the CZ auxiliaries.  Gates: H on all four qubits, CZ
    on (x2, f2) and (x1, f1), then H on f1 and f2.
    """
    c = Circuit(12, name="Shor N=15 a=2")
    for mode in (1, 3, 7, 9):
        c.add(mode, _bs_h())
    _add_cz(c, (3, 4), (9, 10), aux=(5, 11))   # x2 - f2
    _add_cz(c, (1, 2), (7, 8), aux=(0, 6))     # x1 - f1
    c.add(7, _bs_h())
    c.add(9, _bs_h())
    return c


SHOR_INPUT = parse_state("|0,1,0,1,0,0,0,1,0,0,1,0>")

SHOR_ENCODING = LogicalEncoding.dual_rail([(1, 2), (3, 4), (7, 8), (9, 10)])

SHOR_RULE = CountRule([(range(1, 3), 1), (range(3, 5), 1),
                       (range(7, 9), 1), (range(9, 11), 1)])

#: outcomes carrying the period information, each at raw probability 1/324
SHOR_BRIGHT_LABELS = ("0001", "0100", "1011", "1110")


def shor_logical_state(bits: str) -> FockState:
    return SHOR_ENCODING.dual_rail_state(bits, 12)


# ---------------------------------------------------------------------------
# two-qubit search on two spatial modes + polarisation (database size 4)
# ---------------------------------------------------------------------------

#: marked element -> single-photon state, e.g. "10" -> |{P:H},0>
GROVER_STATES = {
    "00": parse_state("|0,{P:H}>"),
    "01": parse_state("|0,{P:V}>"),
    "10": parse_state("|{P:H},0>"),
    "11": parse_state("|{P:V},0>"),
}

#: qubit 0: which spatial mode (0 -> spatial 1); qubit 1: polarisation
GROVER_ENCODING = LogicalEncoding([((2, 3), (0, 1)), ((0, 2), (1, 3))])


def _add_h_pol(circuit: Circuit, mode: int) -> None:
    # half-wave plate at 22.5 deg is i*Hadamard on (H, V); the trailing
    # -pi/2 phase strips the i
    circuit.add(mode, wave_plate(_PI / 2, _PI / 8))
    circuit.add(mode, phase_shifter(-_PI / 2))


def _add_sigma_z_pol(circuit: Circuit, mode: int) -> None:
    # zero-angle half-wave plate is i*diag(1,-1)
    circuit.add(mode, wave_plate(_PI / 2, 0.0))
    circuit.add(mode, phase_shifter(-_PI / 2))


def _add_h_layer(circuit: Circuit) -> None:
    circuit.add(0, _bs_h())
    _add_h_pol(circuit, 0)
    _add_h_pol(circuit, 1)


def grover_circuit(marked: str) -> Circuit:
    """One full search iteration with the oracle marking ``marked``.

    A single photon over two spatial modes and polarisation encodes both
    qubits; with a database of four, one iteration lands on the marked
    element with certainty.
    """
    if marked not in GROVER_STATES:
        raise ValueError("marked element must be one of 00,01,10,11")
    c = Circuit(2, name=f"Grover marks {marked}")
    spatial = 0 if marked[0] == "1" else 1
    _add_h_layer(c)                     # uniform superposition
    _add_sigma_z_pol(c, spatial)        # oracle: -1 on the marked state
    if marked[1] == "0":
        c.add(spatial, phase_shifter(_PI))
    _add_h_layer(c)                     # diffusion, conjugated part
    c.add(0, phase_shifter(_PI))        # 2|00><00| - 1 on the mode basis
    _add_sigma_z_pol(c, 1)
    _add_h_layer(c)
    return c


def grover_input() -> FockState:
    return GROVER_STATES["00"]


# ---------------------------------------------------------------------------
# variational ansatz: 13 splitters, 8 tunable phases around the CNOT
# ---------------------------------------------------------------------------

VQE_N_PARAMS = 8

VQE_INPUT = parse_state("|0,1,0,1,0,0>")

VQE_ENCODING = CNOT_ENCODING

VQE_RULE = CNOT_RULE


def vqe_ansatz(phis) -> Circuit:
    """Six-mode ansatz: per-qubit preparation interferometer, the
    post-selected CNOT, then an arbitrary rotation on each qubit.

    Parameters: ``phis[0:2]`` preparation phases, ``phis[2:5]`` and
    ``phis[5:8]`` the two output rotations.
    """
    phis = np.asarray(phis, dtype=float)
    if phis.shape != (VQE_N_PARAMS,):
        raise ValueError(f"expected {VQE_N_PARAMS} phases, got {phis.shape}")
    c = Circuit(6, name="variational ansatz")
    for qubit, top in enumerate((1, 3)):
        c.add(top, _bs_h())
        c.add(top, phase_shifter(phis[qubit]))
        c.add(top, _bs_h())
    c.add(0, ralph_cnot())
    for qubit, top in enumerate((1, 3)):
        base = 2 + 3 * qubit
        c.add(top, phase_shifter(phis[base]))
        c.add(top, _bs_h())
        c.add(top, phase_shifter(phis[base + 1]))
        c.add(top, _bs_h())
        c.add(top, phase_shifter(phis[base + 2]))
    return c
