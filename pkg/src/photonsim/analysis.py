"""Post-selection, logical gate analysis, sampling certification and the
qubit-encoding bridge between Fock states and computational-basis vectors."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .backends.distribution import Distribution, SampleRecord
from .errors import EmptyPostSelectionError, StateParseError
from .fock import FockState, StateVector

Rule = Callable[[FockState], bool]


class CountRule:
    """Conjunction of exact photon-count constraints on mode ranges.

    The text form is ``count(modes a..b) == k [&& ...]`` with inclusive,
    0-indexed ranges; decidable in O(m) per state.
    """

    def __init__(self, constraints: Sequence[tuple[Sequence[int], int]]):
        self.constraints = tuple(
            (tuple(modes), int(k)) for modes, k in constraints)

    def __call__(self, state: FockState) -> bool:
        occ = state.occupations
        for modes, k in self.constraints:
            if sum(occ[i] for i in modes) != k:
                return False
        return True

    _TERM = re.compile(
        r"^count\(\s*modes\s+(\d+)\s*(?:\.\.\s*(\d+)\s*)?\)\s*==\s*(\d+)$")

    @classmethod
    def parse(cls, text: str) -> "CountRule":
        constraints = []
        for raw in re.split(r"&&|\band\b", text):
            term = raw.strip()
            if not term:
                raise StateParseError(f"empty term in rule {text!r}")
            match = cls._TERM.match(term)
            if not match:
                raise StateParseError(
                    f"bad rule term {term!r}; expected "
                    "'count(modes a..b) == k'")
            lo = int(match.group(1))
            hi = int(match.group(2)) if match.group(2) is not None else lo
            if hi < lo:
                raise StateParseError(f"empty mode range in {term!r}")
            constraints.append((range(lo, hi + 1), int(match.group(3))))
        return cls(constraints)

    def __str__(self):
        terms = []
        for modes, k in self.constraints:
            lo, hi = min(modes), max(modes)
            terms.append(f"count(modes {lo}..{hi}) == {k}")
        return " && ".join(terms)


def post_select(dist: Distribution, rule: Rule
                ) -> tuple[Distribution, float]:
    """Filter by ``rule`` and renormalize; also returns the retained mass."""
    kept = {s: p for s, p in dist.items() if rule(s)}
    mass = sum(kept.values())
    if mass <= 0.0:
        raise EmptyPostSelectionError("post-selection annihilates the state")
    return Distribution({s: p / mass for s, p in kept.items()},
                        total_mass=1.0), mass


# ---------------------------------------------------------------------------
# logical encodings
# ---------------------------------------------------------------------------

class LogicalEncoding:
    """Qubits carried by photon positions.

    Each qubit is a pair of disjoint mode sets: the qubit reads 0 when its
    photon sits in the first set, 1 in the second.  Dual-rail path encoding
    uses singleton sets per qubit; the spatial+polarisation encoding shares
    one photon between qubits through overlapping set pairs.
    """

    def __init__(self, qubits: Sequence[tuple[Sequence[int], Sequence[int]]]):
        self.qubits = tuple((tuple(z), tuple(o)) for z, o in qubits)
        for z, o in self.qubits:
            if set(z) & set(o):
                raise ValueError("a qubit's 0 and 1 mode sets must be disjoint")

    @classmethod
    def dual_rail(cls, pairs: Sequence[tuple[int, int]]) -> "LogicalEncoding":
        enc = cls([((a,), (b,)) for a, b in pairs])
        modes = [m for a, b in pairs for m in (a, b)]
        if len(set(modes)) != len(modes):
            raise ValueError("dual-rail mode pairs must not overlap")
        return enc

    @property
    def qubit_count(self) -> int:
        return len(self.qubits)

    @property
    def dim(self) -> int:
        return 1 << len(self.qubits)

    def basis_index(self, state: FockState) -> int | None:
        """Computational-basis index of a Fock state, or None if invalid.

        Qubit 0 is the most significant bit, matching label strings."""
        index = 0
        for z, o in self.qubits:
            occ = state.occupations
            in_zero = sum(occ[i] for i in z)
            in_one = sum(occ[i] for i in o)
            if (in_zero, in_one) == (1, 0):
                bit = 0
            elif (in_zero, in_one) == (0, 1):
                bit = 1
            else:
                return None
            index = (index << 1) | bit
        return index

    def label(self, index: int) -> str:
        return format(index, f"0{self.qubit_count}b")

    def dual_rail_state(self, bits: str, m: int,
                        annotate: None = None) -> FockState:
        """The canonical dual-rail Fock state for a bit string (singleton
        rails only); all other modes are left empty."""
        occ = [0] * m
        for bit, (z, o) in zip(bits, self.qubits):
            rail = o if bit == "1" else z
            if len(rail) != 1 or len(z) != 1 or len(o) != 1:
                raise ValueError("canonical states need singleton rails")
            occ[rail[0]] += 1
        return FockState(occ)

    def valid_rule(self) -> Rule:
        """Predicate: the state maps to some computational-basis state."""
        return lambda state: self.basis_index(state) is not None


def logical_statevector(sv: StateVector, encoding: LogicalEncoding,
                        rule: Rule | None = None) -> np.ndarray:
    """Post-select a Fock state vector onto the encoded qubit space.

    Returns the renormalized 2^q amplitude vector with the global phase
    fixed by making the first nonzero amplitude real positive.
    """
    out = np.zeros(encoding.dim, dtype=complex)
    for state, amp in sv.items():
        if rule is not None and not rule(state):
            continue
        index = encoding.basis_index(state)
        if index is None:
            continue
        out[index] += amp
    norm = np.linalg.norm(out)
    if norm == 0.0:
        raise EmptyPostSelectionError(
            "post-selection annihilates the state")
    out /= norm
    for value in out:
        if abs(value) > 1e-12:
            out *= value.conjugate() / abs(value)
            break
    return out


# ---------------------------------------------------------------------------
# gate analysis
# ---------------------------------------------------------------------------

class GateAnalysis:
    """Conditional truth table of a post-selected gate.

    ``table[in_label][out_label]`` is the probability of the labeled output
    conditioned on post-selection; ``raw`` holds the unconditioned
    probabilities.  ``performance`` is the worst-case post-selection success
    probability over inputs, ``error_rate`` one minus the mean conditional
    probability of the expected output.
    """

    def __init__(self, labels, table, raw, success, expected):
        self.labels = list(labels)
        self.table = table
        self.raw = raw
        self.success = success
        self.expected = dict(expected)
        self.performance = min(success.values())
        fidelities = [table[i][self.expected[i]] for i in self.labels]
        self.error_rate = 1.0 - sum(fidelities) / len(fidelities)

    @staticmethod
    def _cell(value: float) -> str:
        return "0" if abs(value) < 1e-12 else f"{value:.6g}"

    def format_table(self) -> str:
        cells = {i: {o: self._cell(self.table[i][o]) for o in self.labels}
                 for i in self.labels}
        width = 2 + max(max(len(l) for l in self.labels),
                        max(len(c) for row in cells.values()
                            for c in row.values()))
        head = " " * width + "".join(f"{l:>{width}}" for l in self.labels)
        lines = [head]
        for i in self.labels:
            row = "".join(f"{cells[i][o]:>{width}}" for o in self.labels)
            lines.append(f"{i:<{width}}" + row)
        return "\n".join(lines)

    def summary(self) -> str:
        return (f"performance={_nice_fraction(self.performance)}, "
                f"error rate={self.error_rate * 100:.3f}%")

    def to_csv(self) -> str:
        lines = ["input," + ",".join(self.labels)]
        for i in self.labels:
            lines.append(i + "," + ",".join(
                repr(self.table[i][o]) for o in self.labels))
        return "\n".join(lines) + "\n"


def _nice_fraction(x: float, tol: float = 1e-9) -> str:
    frac = Fraction(x).limit_denominator(1000)
    if abs(float(frac) - x) < tol:
        return f"{frac.numerator}/{frac.denominator}" \
            if frac.denominator != 1 else str(frac.numerator)
    return repr(x)


def analyze_gate(u, states: Mapping[str, FockState],
                 expected: Mapping[str, str],
                 rule: Rule | None = None,
                 distribution=None) -> GateAnalysis:
    """Run every labeled input through ``u`` and tabulate the post-selected
    distribution over the labeled outputs.

    Without an explicit rule, post-selection retains exactly the labeled
    states.  ``distribution`` computes a Distribution from ``(u, input)``
    and defaults to the full-path strong simulation.
    """
    if distribution is None:
        from .backends.slos import slos_full_distribution
        distribution = slos_full_distribution
    labels = list(states)
    if set(expected) != set(labels) or set(expected.values()) - set(labels):
        raise ValueError("expected map must relabel the given states")
    if rule is None:
        labeled = set(states.values())
        rule = lambda s: s in labeled  # noqa: E731
    table: dict[str, dict[str, float]] = {}
    raw: dict[str, dict[str, float]] = {}
    success: dict[str, float] = {}
    for in_label in labels:
        dist = distribution(u, states[in_label])
        raw[in_label] = {out: dist[states[out]] for out in labels}
        selected, mass = post_select(dist, rule)
        success[in_label] = mass
        table[in_label] = {out: selected[states[out]] for out in labels}
    return GateAnalysis(labels, table, raw, success, expected)


# ---------------------------------------------------------------------------
# sampling certification
# ---------------------------------------------------------------------------

def pk_analytic(m: int, n: int, k: int) -> float:
    """Haar average of the probability that all n photons land in the first
    k of m output modes: k(k+1)...(k+n-1) / (m(m+1)...(m+n-1))."""
    if not 1 <= k <= m:
        raise ValueError(f"K must be in 1..{m}, got {k}")
    value = Fraction(1)
    for j in range(n):
        value *= Fraction(k + j, m + j)
    return float(value)


def pk_estimate(samples: SampleRecord | Sequence[FockState], k: int) -> float:
    """Fraction of samples with no photon beyond the first k modes."""
    outcomes = list(samples)
    if not outcomes:
        raise ValueError("no samples to certify")
    m = outcomes[0].m
    if k > m:
        raise ValueError(f"K={k} exceeds the mode count {m}")
    hits = sum(1 for s in outcomes if sum(s.occupations[k:]) == 0)
    return hits / len(outcomes)


# ---------------------------------------------------------------------------
# qubit operators and expectations
# ---------------------------------------------------------------------------

_PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

HERMITICITY_TOL = 1e-12


class QubitOperator:
    """A Hermitian operator on q qubits, stored dense."""

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=complex)
        dim = mat.shape[0]
        if mat.ndim != 2 or mat.shape[1] != dim or dim & (dim - 1):
            raise ValueError(f"need a 2^q x 2^q matrix, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise ValueError("operator is not Hermitian")
        mat.setflags(write=False)
        self.matrix = mat

    @classmethod
    def from_paulis(cls, terms: Sequence[tuple[float, str]]) -> "QubitOperator":
        """Weighted sum of Pauli strings, e.g. ``[(0.5, "XX"), (-1.0, "ZI")]``."""
        qubits = len(terms[0][1])
        total = np.zeros((1 << qubits, 1 << qubits), dtype=complex)
        for coeff, word in terms:
            if len(word) != qubits:
                raise ValueError("all Pauli strings must have equal length")
            op = np.array([[1.0]], dtype=complex)
            for ch in word:
                op = np.kron(op, _PAULIS[ch])
            total += float(coeff) * op
        return cls(total)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def qubit_count(self) -> int:
        return self.dim.bit_length() - 1

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def expectation(vec: np.ndarray, operator: QubitOperator) -> float:
    """Rayleigh quotient <v|H|v> / <v|v>; the imaginary residue must vanish."""
    v = np.asarray(vec, dtype=complex)
    if v.shape != (operator.dim,):
        raise ValueError(f"vector has shape {v.shape}, operator dim "
                         f"{operator.dim}")
    norm = np.vdot(v, v).real
    if norm == 0.0:
        raise ValueError("zero-norm vector has no expectation value")
    value = np.vdot(v, operator.matrix @ v) / norm
    if abs(value.imag) > 1e-10:
        raise ValueError(f"non-real expectation {value}; operator corrupt?")
    return float(value.real)
