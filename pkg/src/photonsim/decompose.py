"""Unitary-to-mesh decompositions: triangular (Reck) and rectangular (Clements).

Both meshes are built from the block::

    T(theta, phi) = [ e^{i phi} cos  -sin ]
                    [ e^{i phi} sin   cos ]

realized as a phase shifter on the upper mode followed by a rotation-type
beam splitter, plus an explicit final layer of phase shifters carrying the
residual diagonal (never dropped, so the round trip reproduces the input
including global phase).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import Circuit, beam_splitter, phase_shifter
from .errors import NumericError
from .linalg import as_matrix, unitarity_defect

#: angles below this are treated as exactly zero when emitting components
_PRUNE_ANGLE = 1e-14

#: defect accepted on decomposition inputs (looser than the Unitary invariant
#: so externally produced matrices survive file round trips)
INPUT_TOL = 1e-8


def _rotation_bs(theta: float):
    # [[cos, -sin], [sin, cos]]
    return beam_splitter(theta=theta, phi_a=0.0, phi_b=math.pi / 2, phi_d=0.0)


def _emit_block(circuit: Circuit, mode: int, theta: float, phi: float) -> None:
    if abs(phi) > _PRUNE_ANGLE:
        circuit.add(mode, phase_shifter(phi))
    if abs(theta) > _PRUNE_ANGLE:
        circuit.add(mode, _rotation_bs(theta))


def _emit_phases(circuit: Circuit, diag: np.ndarray) -> None:
    for mode, d in enumerate(diag):
        phi = cmath.phase(d)
        if abs(phi) > _PRUNE_ANGLE:
            circuit.add(mode, phase_shifter(phi))


def _null_params_right(u1: complex, u2: complex) -> tuple[float, float]:
    """theta, phi with e^{-i phi} cos * u1 = sin * u2 (right-nulling)."""
    if abs(u1) == 0.0:
        return 0.0, 0.0
    if abs(u2) == 0.0:
        return math.pi / 2, 0.0
    return math.atan2(abs(u1), abs(u2)), cmath.phase(u1 / u2)


def _null_params_left(ua: complex, ub: complex) -> tuple[float, float]:
    """theta, phi with e^{i phi} sin * ua = -cos * ub (left-nulling)."""
    if abs(ub) == 0.0:
        return 0.0, 0.0
    if abs(ua) == 0.0:
        return math.pi / 2, 0.0
    return math.atan2(abs(ub), abs(ua)), cmath.phase(-ub / ua)


def _check_input(u) -> np.ndarray:
    mat = np.array(as_matrix(u), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NumericError(f"decomposition needs a square matrix, got {mat.shape}")
    defect = unitarity_defect(mat)
    if defect >= INPUT_TOL:
        raise NumericError(
            f"matrix is not unitary enough to decompose: defect {defect:.3e}")
    return mat


def decompose_triangular(u) -> Circuit:
    """Reck-style triangular mesh reproducing ``u`` (including global phase)."""
    mat = _check_input(u)
    m = mat.shape[0]
    circuit = Circuit(m, name="triangular mesh")
    blocks: list[tuple[int, float, float]] = []
    for row in range(m - 1, 0, -1):
        for col in range(row):
            theta, phi = _null_params_right(mat[row, col], mat[row, col + 1])
            c, s = math.cos(theta), math.sin(theta)
            e = cmath.exp(-1j * phi)
            col_k = mat[:, col].copy()
            col_k1 = mat[:, col + 1].copy()
            mat[:, col] = e * c * col_k - s * col_k1
            mat[:, col + 1] = e * s * col_k + c * col_k1
            mat[row, col] = 0.0
            blocks.append((col, theta, phi))
    for mode, theta, phi in blocks:
        _emit_block(circuit, mode, theta, phi)
    _emit_phases(circuit, np.diagonal(mat) / np.abs(np.diagonal(mat)))
    return circuit


def decompose_rectangular(u) -> Circuit:
    """Clements-style rectangular mesh (depth <= m) reproducing ``u``."""
    mat = _check_input(u)
    m = mat.shape[0]
    right_ops: list[tuple[int, float, float]] = []  # application order
    left_ops: list[tuple[int, float, float]] = []
    for i in range(1, m):
        if i % 2 == 1:
            for j in range(i):
                row, col = m - 1 - j, i - 1 - j
                theta, phi = _null_params_right(mat[row, col], mat[row, col + 1])
                c, s = math.cos(theta), math.sin(theta)
                e = cmath.exp(-1j * phi)
                col_k = mat[:, col].copy()
                col_k1 = mat[:, col + 1].copy()
                mat[:, col] = e * c * col_k - s * col_k1
                mat[:, col + 1] = e * s * col_k + c * col_k1
                mat[row, col] = 0.0
                right_ops.append((col, theta, phi))
        else:
            for j in range(1, i + 1):
                row, col = m + j - i - 1, j - 1
                theta, phi = _null_params_left(mat[row - 1, col], mat[row, col])
                c, s = math.cos(theta), math.sin(theta)
                e = cmath.exp(1j * phi)
                row_k = mat[row - 1, :].copy()
                row_k1 = mat[row, :].copy()
                mat[row - 1, :] = e * c * row_k - s * row_k1
                mat[row, :] = e * s * row_k + c * row_k1
                mat[row, col] = 0.0
                left_ops.append((row - 1, theta, phi))
    diag = np.diagonal(mat).copy()
    diag = diag / np.abs(diag)
    # Push the residual diagonal through the left blocks:
    # T(theta,phi)^dag D = D' T(theta,phi') with d1' = -e^{-i phi} d2,
    # d2' = d2 and phi' = arg(-d1/d2).
    rewritten: list[tuple[int, float, float]] = []
    for mode, theta, phi in reversed(left_ops):
        if abs(theta) <= _PRUNE_ANGLE:
            # T(0, phi)^dag is the pure phase diag(e^{-i phi}, 1): absorb it
            diag[mode] *= cmath.exp(-1j * phi)
            continue
        d1, d2 = diag[mode], diag[mode + 1]
        phi_new = cmath.phase(-d1 / d2)
        diag[mode] = -cmath.exp(-1j * phi) * d2
        rewritten.append((mode, theta, phi_new))
    circuit = Circuit(m, name="rectangular mesh")
    for mode, theta, phi in right_ops:
        _emit_block(circuit, mode, theta, phi)
    for mode, theta, phi in rewritten:
        _emit_block(circuit, mode, theta, phi)
    _emit_phases(circuit, diag)
    return circuit
