"""Dense complex matrices: unitarity checks, Haar sampling, file formats.

Matrices are plain ``numpy`` complex128 arrays; :class:`Unitary` is a thin
validated wrapper used wherever unitarity is part of the contract.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import NumericError, StateParseError
from .fock import FockState

#: max-norm tolerance on U^dag U - I accepted at construction
UNITARITY_TOL = 1e-10


def unitarity_defect(mat: np.ndarray) -> float:
    """max-norm of U^dag U - I."""
    mat = np.asarray(mat)
    ident = np.eye(mat.shape[0])
    return float(np.abs(mat.conj().T @ mat - ident).max())


class Unitary:
    """An m x m complex matrix verified unitary to ``UNITARITY_TOL``.

    The wrapped array is read-only.  Internal composition of unitaries may
    bypass the check via :meth:`trusted` (composition preserves unitarity).
    """

    __slots__ = ("mat",)

    def __init__(self, mat, *, tol: float = UNITARITY_TOL):
        arr = np.array(mat, dtype=complex, order="C")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NumericError(f"unitary must be square, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise NumericError("matrix contains NaN or Inf entries")
        defect = unitarity_defect(arr)
        if defect >= tol:
            raise NumericError(
                f"matrix is not unitary: max-norm defect {defect:.3e} >= {tol}")
        arr.setflags(write=False)
        object.__setattr__(self, "mat", arr)

    @classmethod
    def trusted(cls, arr: np.ndarray) -> "Unitary":
        obj = object.__new__(cls)
        a = np.ascontiguousarray(arr, dtype=complex)
        a.setflags(write=False)
        object.__setattr__(obj, "mat", a)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Unitary is immutable")

    @property
    def m(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self):
        return f"Unitary(m={self.m})"


def as_matrix(u) -> np.ndarray:
    """Accept a Unitary or a bare array and return the ndarray view."""
    if isinstance(u, Unitary):
        return u.mat
    return np.asarray(u, dtype=complex)


def submatrix_ts(u, input_state: FockState, output_state: FockState
                 ) -> np.ndarray:
    """The n x n transition submatrix for input T and output S.

    Row ``i`` of U is repeated ``s_i`` times (output pattern), then column
    ``j`` is repeated ``t_j`` times (input pattern), both in mode order.
    """
    mat = as_matrix(u)
    m = mat.shape[0]
    if input_state.m != m or output_state.m != m:
        raise ValueError(
            f"mode count mismatch: U is {m}x{m}, states have "
            f"{input_state.m} and {output_state.m} modes")
    if input_state.n != output_state.n:
        raise ValueError(
            f"photon number mismatch: {input_state.n} in, {output_state.n} out")
    rows = output_state.photon_modes()
    cols = input_state.photon_modes()
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    return mat[np.ix_(rows, cols)]


def haar_unitary(m: int, rng) -> Unitary:
    """Draw an m x m Haar-random unitary.

    QR decomposition of a complex Ginibre matrix with the usual phase fix
    Q <- Q diag(r_ii/|r_ii|); deterministic for a given Generator state.
    ``rng`` may be a seed or a ``numpy.random.Generator``.
    """
    rng = np.random.default_rng(rng) if not isinstance(
        rng, np.random.Generator) else rng
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Unitary(q)


# ---------------------------------------------------------------------------
# matrix files: text rows of re+imj entries, or a little-endian binary blob
# ---------------------------------------------------------------------------

def _format_entry(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    sign = "+" if im >= 0 or np.isnan(im) else "-"
    return f"{re!r}{sign}{abs(im)!r}j"


def dump_matrix_text(mat: np.ndarray) -> str:
    mat = np.asarray(mat, dtype=complex)
    return "\n".join(" ".join(_format_entry(z) for z in row)
                     for row in mat) + "\n"


def parse_matrix_text(text: str) -> np.ndarray:
    rows = []
    width = None
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [complex(tok) for tok in line.split()]
        except ValueError as exc:
            raise StateParseError(f"bad matrix entry: {exc}", line=ln)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise StateParseError(
                f"ragged matrix row ({len(row)} entries, expected {width})",
                line=ln)
        rows.append(row)
    if not rows:
        raise StateParseError("empty matrix file")
    arr = np.array(rows, dtype=complex)
    if not np.isfinite(arr).all():
        raise NumericError("matrix contains NaN or Inf entries")
    return arr


_BIN_HEADER = struct.Struct("<qq")


def dump_matrix_binary(mat: np.ndarray) -> bytes:
    mat = np.ascontiguousarray(mat, dtype=np.complex128)
    header = _BIN_HEADER.pack(mat.shape[0], mat.shape[1])
    return header + mat.astype("<c16", copy=False).tobytes()


def parse_matrix_binary(blob: bytes) -> np.ndarray:
    if len(blob) < _BIN_HEADER.size:
        raise StateParseError("binary matrix file too short for header")
    rows, cols = _BIN_HEADER.unpack_from(blob)
    expected = _BIN_HEADER.size + rows * cols * 16
    if rows < 0 or cols < 0 or len(blob) != expected:
        raise StateParseError(
            f"binary matrix payload size mismatch (header says {rows}x{cols})")
    arr = np.frombuffer(blob, dtype="<c16", offset=_BIN_HEADER.size)
    arr = arr.reshape(rows, cols).astype(np.complex128)
    if not np.isfinite(arr).all():
        raise NumericError("matrix contains NaN or Inf entries")
    return arr


def save_matrix(path, mat: np.ndarray, binary: bool | None = None) -> None:
    """Write a matrix file; binary if requested or the path ends in .bin."""
    binary = str(path).endswith(".bin") if binary is None else binary
    if binary:
        with open(path, "wb") as fh:
            fh.write(dump_matrix_binary(mat))
    else:
        with open(path, "w") as fh:
            fh.write(dump_matrix_text(mat))


def load_matrix(path) -> np.ndarray:
    """Read a matrix file, sniffing text vs binary."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if str(path).endswith(".bin"):
        return parse_matrix_binary(blob)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError:
        return parse_matrix_binary(blob)
    return parse_matrix_text(text)
