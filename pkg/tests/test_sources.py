"""Imperfect sources, time-circuit unrolling and the streamed delay-line
simulation."""

import numpy as np
import pytest

from photonsim.backends import simulate_annotated
from photonsim.circuit import (Circuit, beam_splitter, compute_unitary,
                               time_delay)
from photonsim.errors import CapacityError
from photonsim.fock import FockState
from photonsim.gallery import hom_circuit
from photonsim.linalg import unitarity_defect
from photonsim.sources import (COMMON_TAG, SourceModel, coincidence_histogram,
                               simulate_hom, simulate_time_circuit,
                               source_emit, unroll_time_circuit)


class TestSourceModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            SourceModel(1.2, 0.0, 1.0)
        with pytest.raises(ValueError):
            SourceModel(1.0, -0.1, 1.0)

    def test_perfect_source(self, rng):
        model = SourceModel(1.0, 0.0, 1.0)
        for period in range(50):
            state = source_emit(model, period, rng)
            assert state.occupations == (1,)
            assert state.annotations == ((COMMON_TAG,),)

    def test_dark_source(self, rng):
        model = SourceModel(0.0, 0.5, 0.5)
        assert all(source_emit(model, p, rng).n == 0 for p in range(50))

    def test_double_emission_rate(self, rng):
        model = SourceModel(1.0, 0.01, 1.0)
        periods = 100_000
        doubles = sum(source_emit(model, p, rng).n == 2
                      for p in range(periods))
        # binomial: mean 1000, sigma ~31
        assert abs(doubles - periods * 0.01) < 5 * np.sqrt(periods * 0.01)

    def test_pair_photon_is_distinguishable(self, rng):
        model = SourceModel(1.0, 1.0, 1.0)
        state = source_emit(model, 3, rng)
        assert state.n == 2
        tags = state.annotations[0]
        assert COMMON_TAG in tags
        assert len(set(tags)) == 2

    def test_distinguishable_signal(self, rng):
        model = SourceModel(1.0, 0.0, 0.0)
        tags = {source_emit(model, p, rng).annotations[0][0]
                for p in range(20)}
        assert COMMON_TAG not in tags
        assert len(tags) == 20  # unique per period


class TestUnroll:
    def test_pure_delay_is_shift_permutation(self):
        c = Circuit(1).add(0, time_delay(1))
        unrolled, layout = unroll_time_circuit(c, periods=2)
        assert layout.bins == 3
        u = compute_unitary(unrolled).mat
        # bin t feeds bin t+1 (cyclically through the empty tail)
        for t in range(3):
            assert u[layout.index(0, (t + 1) % 3), layout.index(0, t)] == 1

    def test_hom_unroll_is_unitary(self):
        unrolled, layout = unroll_time_circuit(hom_circuit(), periods=3)
        assert layout.m == 2 and layout.bins == 4
        assert unitarity_defect(compute_unitary(unrolled).mat) < 1e-10

    def test_no_delay_replicates_per_bin(self):
        c = Circuit(2).add(0, beam_splitter(R=0.5)).add(1, time_delay(1))
        plain = Circuit(2).add(0, beam_splitter(R=0.5))
        unrolled, layout = unroll_time_circuit(plain, periods=3)
        assert layout.bins == 3
        u = compute_unitary(unrolled).mat
        # block diagonal per bin, no cross-bin coupling
        assert abs(u[layout.index(0, 0), layout.index(0, 1)]) == 0.0
        del c

    def test_mode_budget(self):
        c = Circuit(2).add(1, time_delay(1))
        with pytest.raises(CapacityError):
            unroll_time_circuit(c, periods=100_000)


def ideal_coincidence_tau0_exact(periods: int = 3) -> float:
    """Exact tau=0 coincidence probability for the ideal source, computed
    through the unrolled circuit (the oracle route, no sampling)."""
    unrolled, layout = unroll_time_circuit(hom_circuit(), periods)
    u = compute_unitary(unrolled)
    occupations = [0] * layout.total_modes
    annotations = [()] * layout.total_modes
    for p in range(periods):
        occupations[layout.index(0, p)] = 1
        annotations[layout.index(0, p)] = (COMMON_TAG,)
    state = FockState(occupations, annotations)
    dist = simulate_annotated(u, state)
    prob = 0.0
    for outcome, p in dist.items():
        for t in range(layout.bins):
            if (outcome.occupations[layout.index(0, t)] >= 1
                    and outcome.occupations[layout.index(1, t)] >= 1):
                prob += p
                break
    return prob


class TestHom:
    def test_ideal_tau0_exactly_zero_on_exact_distribution(self):
        assert ideal_coincidence_tau0_exact(periods=3) < 1e-12

    def test_ideal_source_never_coincides_at_tau0(self):
        model = SourceModel(1.0, 0.0, 1.0)
        hist = simulate_hom(hom_circuit(), model, periods=4000, seed=11)
        assert hist[0] == 0
        assert hist[1] > 0 and hist[-1] > 0

    def test_double_emission_fills_tau0(self):
        model = SourceModel(1.0, 0.05, 1.0)
        hist = simulate_hom(hom_circuit(), model, periods=20_000, seed=11)
        assert hist[0] > 0
        assert hist[0] < 0.5 * min(hist[1], hist[-1])

    def test_histogram_roughly_symmetric(self):
        model = SourceModel(1.0, 0.01, 1.0)
        hist = simulate_hom(hom_circuit(), model, periods=30_000, seed=4)
        for tau in (1, 2, 3):
            hi, lo = max(hist[tau], hist[-tau]), min(hist[tau], hist[-tau])
            assert hi - lo < 6 * np.sqrt(hi)

    def test_trace_determinism(self):
        model = SourceModel(0.8, 0.02, 0.9)
        a = simulate_time_circuit(hom_circuit(), model, 500, seed=17)
        b = simulate_time_circuit(hom_circuit(), model, 500, seed=17)
        assert a == b

    def test_histogram_counts_are_pair_products(self):
        model = SourceModel(1.0, 0.0, 1.0)
        trace = simulate_time_circuit(hom_circuit(), model, 300, seed=8)
        hist = coincidence_histogram(trace, window=2)
        a = trace.counts_by_detector(0)
        b = trace.counts_by_detector(1)
        expected = sum(c1 * b.get(t + tau, 0) for t, c1 in a.items()
                       for tau in range(-2, 3))
        assert sum(hist.values()) == expected

    def test_photon_bookkeeping(self):
        # lossless circuit: every emitted photon is eventually detected
        model = SourceModel(1.0, 0.1, 0.7)
        trace = simulate_time_circuit(hom_circuit(), model, 400, seed=33)
        assert trace.photons_emitted > 0
        assert trace.total_detections() == trace.photons_emitted

    def test_needs_two_modes(self):
        c = Circuit(3).add(0, beam_splitter(R=0.5)).add(1, time_delay(1))
        with pytest.raises(ValueError):
            simulate_hom(c, SourceModel(1, 0, 1), 10, seed=0)

    def test_streaming_matches_unrolled_statistics(self):
        # single period, one photon: the bin-0/bin-1 detector statistics of
        # the streamed run must match the exact unrolled distribution
        unrolled, layout = unroll_time_circuit(hom_circuit(), 1)
        u = compute_unitary(unrolled)
        state_occ = [0] * layout.total_modes
        state_occ[layout.index(0, 0)] = 1
        exact = {}
        from photonsim.backends import slos_full_distribution
        for outcome, p in slos_full_distribution(u, FockState(state_occ)).items():
            key = tuple((d, t) for t in range(layout.bins) for d in range(2)
                        if outcome.occupations[layout.index(d, t)])
            exact[key] = exact.get(key, 0.0) + p
        model = SourceModel(1.0, 0.0, 1.0)
        counts: dict[tuple, int] = {}
        runs = 4000
        for seed in range(runs):
            trace = simulate_time_circuit(hom_circuit(), model, 1, seed=seed)
            key = tuple((d, t) for d, t, c in sorted(
                trace.events, key=lambda e: (e[1], e[0])) for _ in range(c))
            counts[key] = counts.get(key, 0) + 1
        for key, p in exact.items():
            if p < 1e-9:
                continue
            observed = counts.get(key, 0) / runs
            sigma = np.sqrt(p * (1 - p) / runs)
            assert abs(observed - p) < 5 * sigma + 0.01
