"""Imperfect single-photon sources and discrete time-bin simulation.

Time circuits (circuits containing delay lines) are handled two ways:

* :func:`unroll_time_circuit` turns a time circuit plus a period count into
  an ordinary static circuit over ``modes x bins``, exact and convenient for
  small cases;
* :func:`simulate_time_circuit` streams period by period, keeping only the
  quantum state of the delay lines in memory and measuring each bin's
  detector modes as it completes.  Detection commutes with later evolution,
  so the streamed statistics match the unrolled circuit while supporting
  very long runs.

Time is discretized to source periods: one bin per emission cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backends.stepper import apply_block
from .circuit import Circuit, component_unitary, mode_permutation
from .errors import CapacityError
from .fock import FockState, StateVector

#: tag shared by fully indistinguishable signal photons
COMMON_TAG = "S"

#: expanded-mode cap for unrolled time circuits
MAX_UNROLLED_MODES = 4096


@dataclass(frozen=True)
class SourceModel:
    """Per-period emitter: emission probability, two-photon probability on an
    emitting cycle, and the probability a signal photon is indistinguishable
    from the others (carries the common tag)."""

    emission_prob: float
    multi_photon_prob: float
    indistinguishability: float

    def __post_init__(self):
        for name in ("emission_prob", "multi_photon_prob",
                     "indistinguishability"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


def source_emit(model: SourceModel, period: int, rng) -> FockState:
    """One emission cycle: 0, 1 or 2 tagged photons on a single mode.

    The second photon of a double emission is always distinguishable noise
    (fresh unique tag); a signal photon gets a fresh tag with probability
    ``1 - indistinguishability``.
    """
    tags: list[str] = []
    if rng.random() < model.emission_prob:
        if rng.random() < model.indistinguishability:
            tags.append(COMMON_TAG)
        else:
            tags.append(f"d{period}a")
        if rng.random() < model.multi_photon_prob:
            tags.append(f"d{period}b")
    return FockState([len(tags)], [tags])


# ---------------------------------------------------------------------------
# exact unrolling onto modes x bins
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeBinLayout:
    """Index map of the unrolled circuit: (mode, bin) -> bin * m + mode."""

    m: int
    bins: int

    def index(self, mode: int, bin_: int) -> int:
        return bin_ * self.m + mode

    @property
    def total_modes(self) -> int:
        return self.m * self.bins


def _total_delay(circuit: Circuit) -> int:
    return sum(c.param("periods") for _, c in circuit.flatten()
               if c.kind == "td")


def unroll_time_circuit(circuit: Circuit, periods: int
                        ) -> tuple[Circuit, TimeBinLayout]:
    """Replicate the circuit per bin; each delay becomes a bin-shift wiring.

    The expanded circuit spans ``m * (periods + total delay)`` plain modes
    (delays wrap cyclically into the always-empty tail bins, keeping the
    wiring a permutation).
    """
    if periods < 1:
        raise ValueError("need at least one period")
    m = circuit.m
    bins = periods + _total_delay(circuit)
    layout = TimeBinLayout(m, bins)
    if layout.total_modes > MAX_UNROLLED_MODES:
        raise CapacityError(
            f"unrolling needs {layout.total_modes} modes, "
            f"cap is {MAX_UNROLLED_MODES}")
    out = Circuit(layout.total_modes,
                  name=f"{circuit.name or 'time circuit'} x {bins} bins")
    for offset, comp in circuit.flatten():
        if comp.kind == "td":
            delay = comp.param("periods")
            wire = offset
            perm = list(range(layout.total_modes))
            for t in range(bins):
                perm[layout.index(wire, t)] = layout.index(
                    wire, (t + delay) % bins)
            out.add(0, mode_permutation(perm))
        else:
            for t in range(bins):
                out.add(layout.index(offset, t), comp)
    return out, layout


# ---------------------------------------------------------------------------
# streaming simulation with per-bin measurement collapse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionTrace:
    """Sampled detection events: (detector mode, time bin, photon count)."""

    events: tuple[tuple[int, int, int], ...]
    periods: int
    bins: int
    photons_emitted: int = 0

    def counts_by_detector(self, mode: int) -> dict[int, int]:
        return {t: c for d, t, c in self.events if d == mode}

    def total_detections(self) -> int:
        return sum(c for _, _, c in self.events)


def _permute_modes(sv: StateVector, mapping: list[int]) -> StateVector:
    terms: dict[FockState, complex] = {}
    for state, amp in sv.items():
        occ = state.occupations
        new = [0] * len(occ)
        for src, count in enumerate(occ):
            new[mapping[src]] = count
        terms[FockState(new)] = amp
    return StateVector(terms, m=sv.m)


class _DelayLineEngine:
    """Streams a time circuit period by period.

    Extended mode layout per bin: the m circuit wires first, then one
    register per delay period of every delay line.  Tag groups evolve
    independently (different tags never interfere)."""

    def __init__(self, circuit: Circuit, input_mode: int):
        self.m = circuit.m
        self.input_mode = input_mode
        self.ops: list[tuple] = []
        reg = circuit.m
        for offset, comp in circuit.flatten():
            if comp.kind == "td":
                delay = comp.param("periods")
                regs = list(range(reg, reg + delay))
                reg += delay
                self.ops.append(("delay", offset, regs))
            else:
                self.ops.append(("block", offset, component_unitary(comp)))
        self.total = reg
        self.registers = list(range(circuit.m, reg))
        # register content per tag, as a state over the register modes only
        self.tag_states: dict[str, StateVector] = {}

    def _extended(self, reg_sv: StateVector | None, fresh: int) -> StateVector:
        terms: dict[FockState, complex] = {}
        wires = [0] * self.m
        wires[self.input_mode] = fresh
        if reg_sv is None:
            reg_items = [(FockState([0] * max(len(self.registers), 1))
                          if self.registers else None, 1.0 + 0j)]
        else:
            reg_items = list(reg_sv.items())
        for reg_state, amp in reg_items:
            regs = list(reg_state.occupations) if self.registers else []
            terms[FockState(wires + regs)] = amp
        return StateVector(terms, m=self.total)

    def _run_bin(self, sv: StateVector) -> StateVector:
        for op in self.ops:
            if op[0] == "block":
                _, offset, mat = op
                sv = apply_block(sv, offset, mat)
            else:
                _, wire, regs = op
                mapping = list(range(self.total))
                # FIFO: oldest register pops onto the wire, wire content
                # enters the back of the line
                mapping[regs[0]] = wire
                for a, b in zip(regs[1:], regs[:-1]):
                    mapping[a] = b
                mapping[wire] = regs[-1]
                sv = _permute_modes(sv, mapping)
        return sv

    def step(self, emissions: dict[str, int], rng) -> dict[int, int]:
        """Advance one period; returns detector counts for this bin."""
        detected: dict[int, int] = {}
        tags = sorted(set(self.tag_states) | set(emissions))
        for tag in tags:
            sv = self._extended(self.tag_states.get(tag),
                                emissions.get(tag, 0))
            sv = self._run_bin(sv)
            wire_counts, reg_sv = self._measure_wires(sv, rng)
            for mode, count in wire_counts.items():
                if count:
                    detected[mode] = detected.get(mode, 0) + count
            if reg_sv is None:
                self.tag_states.pop(tag, None)
            else:
                self.tag_states[tag] = reg_sv
        return detected

    def _measure_wires(self, sv: StateVector, rng
                       ) -> tuple[dict[int, int], StateVector | None]:
        patterns: dict[tuple[int, ...], dict[FockState, complex]] = {}
        weights: dict[tuple[int, ...], float] = {}
        n_regs = len(self.registers)
        for state, amp in sv.items():
            occ = state.occupations
            wires = occ[:self.m]
            regs = occ[self.m:] if n_regs else (0,)
            reg_state = FockState(regs)
            patterns.setdefault(wires, {})[reg_state] = amp
            weights[wires] = weights.get(wires, 0.0) + (amp * amp.conjugate()).real
        keys = sorted(weights)
        probs = np.array([weights[k] for k in keys])
        total = probs.sum()
        pick = keys[int(np.searchsorted(np.cumsum(probs / total),
                                        rng.random(), side="right")
                        .clip(0, len(keys) - 1))]
        norm = math.sqrt(weights[pick])
        reg_terms = {s: a / norm for s, a in patterns[pick].items()}
        counts = {i: c for i, c in enumerate(pick)}
        # a pure vacuum register state means the group is finished
        vacuum = FockState([0] * max(n_regs, 1))
        if (not self.registers) or (
                len(reg_terms) == 1 and vacuum in reg_terms):
            return counts, None
        return counts, StateVector(reg_terms, m=max(n_regs, 1))


def simulate_time_circuit(circuit: Circuit, source: SourceModel,
                          periods: int, seed: int | None = None,
                          input_mode: int = 0) -> DetectionTrace:
    """Monte-Carlo run: emit per period, stream through the delay lines,
    detect every bin.  Deterministic for a given seed."""
    if not circuit.is_time_circuit:
        raise ValueError("circuit has no delay line; use a plain back-end")
    if circuit.has_polarization:
        raise CapacityError(
            "polarisation components inside time circuits are unsupported")
    rng = np.random.default_rng(seed)
    engine = _DelayLineEngine(circuit, input_mode)
    bins = periods + _total_delay(circuit)
    events: list[tuple[int, int, int]] = []
    emitted = 0
    for t in range(bins):
        tag_counts: dict[str, int] = {}
        if t < periods:
            emission = source_emit(source, t, rng)
            emitted += emission.n
            for tags in emission.annotations or ():
                for tag in tags:
                    tag_counts[tag] = tag_counts.get(tag, 0) + 1
        detected = engine.step(tag_counts, rng)
        for mode in sorted(detected):
            events.append((mode, t, detected[mode]))
    return DetectionTrace(tuple(events), periods, bins, emitted)


def coincidence_histogram(trace: DetectionTrace,
                          detectors: tuple[int, int] = (0, 1),
                          window: int = 5) -> dict[int, int]:
    """Start-stop correlator: every detection on detector A pairs with every
    detection on detector B within +-window bins; tau = t_B - t_A."""
    a = trace.counts_by_detector(detectors[0])
    b = trace.counts_by_detector(detectors[1])
    hist = {tau: 0 for tau in range(-window, window + 1)}
    for t1, c1 in a.items():
        for tau in range(-window, window + 1):
            c2 = b.get(t1 + tau)
            if c2:
                hist[tau] += c1 * c2
    return hist


def simulate_hom(circuit: Circuit, source: SourceModel, periods: int,
                 seed: int | None = None, window: int = 5) -> dict[int, int]:
    """Correlation histogram tau -> coincidence count for a two-detector
    time circuit (the Hong-Ou-Mandel topology)."""
    if circuit.m != 2:
        raise ValueError("the correlation histogram needs a 2-detector circuit")
    trace = simulate_time_circuit(circuit, source, periods, seed)
    return coincidence_histogram(trace, window=window)
