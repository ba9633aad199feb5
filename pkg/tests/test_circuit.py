"""Component matrices, circuit composition and the circuit file format."""

import math

import numpy as np
import pytest

from photonsim.circuit import (Circuit, beam_splitter, component_unitary,
                               compute_unitary, dump_circuit,
                               expanded_unitary, mode_permutation,
                               parse_circuit, phase_shifter,
                               polarization_rotator,
                               polarizing_beam_splitter, time_delay,
                               wave_plate)
from photonsim.errors import CapabilityError, StateParseError
from photonsim.gallery import ralph_cnot
from photonsim.linalg import unitarity_defect

INV_SQRT2 = 1 / math.sqrt(2)

#: the published composed matrix of the six-mode post-selected CNOT
S3 = math.sqrt(3) / 3
S6 = math.sqrt(6) / 3
CNOT_UNITARY = np.array([
    [S3, -S6 * 1j, 0, 0, 0, 0],
    [-S6 * 1j, S3, 0, 0, 0, 0],
    [0, 0, S3, -S3 * 1j, -S3 * 1j, 0],
    [0, 0, -S3 * 1j, S3, 0, S3],
    [0, 0, -S3 * 1j, 0, S3, -S3],
    [0, 0, 0, S3, -S3, -S3],
])


class TestComponentMatrices:
    def test_bs_all_phases_zero(self):
        got = component_unitary(
            beam_splitter(theta=math.pi / 4, phi_a=0, phi_b=0, phi_d=0))
        want = INV_SQRT2 * np.array([[1, 1j], [1j, 1]])
        assert np.abs(got - want).max() < 1e-15

    def test_bs_default_is_real_hadamard_like(self):
        got = component_unitary(beam_splitter(R=0.5))
        want = INV_SQRT2 * np.array([[1, 1], [1, -1]])
        assert np.abs(got - want).max() < 1e-15

    def test_bs_reflectivity_on_cross_port(self):
        # R is the power coupled across: |u01|^2 = R
        for big_r in (0.0, 0.25, 2 / 3, 1.0):
            u = component_unitary(beam_splitter(R=big_r))
            assert abs(abs(u[0, 1]) ** 2 - big_r) < 1e-12
            assert unitarity_defect(u) < 1e-12

    def test_bs_cnot_style_phases(self):
        # the CNOT's interfering splitter: diagonal sqrt(1/3), two-photon
        # bunching sign from the -i sqrt(2/3) cross terms
        u = component_unitary(beam_splitter(R=2 / 3, phi_b=math.pi, phi_d=0))
        assert abs(u[0, 0] - S3) < 1e-15
        assert abs(u[0, 1] - (-1j * S6)) < 1e-15
        assert abs(u[1, 0] - (-1j * S6)) < 1e-15

    def test_bs_validation(self):
        with pytest.raises(ValueError):
            beam_splitter()
        with pytest.raises(ValueError):
            beam_splitter(theta=1.0, R=0.5)
        with pytest.raises(ValueError):
            beam_splitter(R=1.5)

    def test_phase_shifter(self):
        got = component_unitary(phase_shifter(math.pi))
        assert abs(got[0, 0] + 1.0) < 1e-15

    def test_permutation(self):
        got = component_unitary(mode_permutation([2, 0, 1]))
        # photon on local mode 0 exits on mode 2
        assert got[2, 0] == 1 and got[0, 1] == 1 and got[1, 2] == 1
        with pytest.raises(ValueError):
            mode_permutation([0, 0, 1])

    def test_half_wave_plate(self):
        got = component_unitary(wave_plate(math.pi / 2, math.pi / 4))
        want = 1j * np.array([[0, 1], [1, 0]])
        assert np.abs(got - want).max() < 1e-15

    def test_pbs(self):
        got = component_unitary(polarizing_beam_splitter())
        want = np.array([[0, 0, 1, 0], [0, 1, 0, 0],
                         [1, 0, 0, 0], [0, 0, 0, 1]])
        assert np.array_equal(got, want)

    def test_rotator(self):
        got = component_unitary(polarization_rotator(0.3))
        assert abs(got[0, 0] - math.cos(0.3)) < 1e-15
        assert abs(got[1, 0] + math.sin(0.3)) < 1e-15

    def test_time_delay_has_no_unitary(self):
        with pytest.raises(CapabilityError):
            component_unitary(time_delay(1))
        with pytest.raises(ValueError):
            time_delay(0)


class TestCircuit:
    def test_placement_bounds(self):
        c = Circuit(6)
        with pytest.raises(ValueError):
            c.add(5, beam_splitter(R=0.5))
        c.add(4, beam_splitter(R=0.5))
        assert c.component_count() == 1

    def test_empty_circuit_is_identity(self):
        u = compute_unitary(Circuit(4))
        assert np.array_equal(u.mat, np.eye(4))

    def test_cnot_matches_published_matrix(self):
        u = compute_unitary(ralph_cnot())
        assert np.abs(u.mat - CNOT_UNITARY).max() < 1e-12

    def test_cascaded_phases_add(self):
        c = Circuit(1).add(0, phase_shifter(0.4)).add(0, phase_shifter(0.8))
        u = compute_unitary(c)
        assert abs(u.mat[0, 0] - np.exp(1.2j)) < 1e-12

    def test_composition_is_unitary(self, rng):
        c = Circuit(5)
        for _ in range(30):
            c.add(int(rng.integers(0, 4)),
                  beam_splitter(theta=rng.uniform(0, math.pi / 2),
                                phi_b=rng.uniform(0, 2 * math.pi)))
            c.add(int(rng.integers(0, 5)),
                  phase_shifter(rng.uniform(0, 2 * math.pi)))
        assert unitarity_defect(compute_unitary(c).mat) < 1e-10

    def test_nested_subcircuit_flattens_in_order(self):
        inner = Circuit(2, name="half").add(0, phase_shifter(0.3))
        outer = Circuit(4).add(1, inner).add(1, beam_splitter(R=0.5))
        flat = list(outer.flatten())
        assert flat[0] == (1, phase_shifter(0.3))
        nested_u = compute_unitary(outer)
        direct = (Circuit(4).add(1, phase_shifter(0.3))
                  .add(1, beam_splitter(R=0.5)))
        assert np.abs(nested_u.mat - compute_unitary(direct).mat).max() < 1e-15

    def test_first_placed_acts_first(self):
        # distinguishable order: PS then BS vs BS then PS on one arm
        a = Circuit(2).add(0, phase_shifter(1.0)).add(0, beam_splitter(R=0.5))
        b = Circuit(2).add(0, beam_splitter(R=0.5)).add(0, phase_shifter(1.0))
        ua, ub = compute_unitary(a).mat, compute_unitary(b).mat
        bs = component_unitary(beam_splitter(R=0.5))
        ps = np.diag([np.exp(1j), 1.0])
        assert np.abs(ua - bs @ ps).max() < 1e-15
        assert np.abs(ub - ps @ bs).max() < 1e-15

    def test_time_circuit_refuses_static_unitary(self):
        c = Circuit(2).add(0, beam_splitter(R=0.5)).add(1, time_delay(1))
        assert c.is_time_circuit
        with pytest.raises(CapabilityError):
            compute_unitary(c)

    def test_polarized_circuit_needs_expansion(self):
        c = Circuit(2).add(0, wave_plate(0.2, 0.1))
        assert c.has_polarization
        with pytest.raises(CapabilityError):
            compute_unitary(c)
        u = expanded_unitary(c)
        assert u.m == 4
        assert unitarity_defect(u.mat) < 1e-10

    def test_expanded_spatial_component_acts_per_polarization(self):
        c = Circuit(2).add(0, beam_splitter(R=0.5))
        u = expanded_unitary(c).mat
        bs = component_unitary(beam_splitter(R=0.5))
        assert np.abs(u[0::2, 0::2] - bs).max() < 1e-15
        assert np.abs(u[1::2, 1::2] - bs).max() < 1e-15
        assert np.abs(u[0::2, 1::2]).max() == 0.0


class TestCircuitFiles:
    def test_roundtrip_losslessly(self):
        c = (Circuit(4, name="probe")
             .add(0, beam_splitter(R=1 / 3, phi_b=0.1234567890123456))
             .add(2, beam_splitter(theta=0.7853981633974483))
             .add(1, phase_shifter(-2.5))
             .add(0, mode_permutation([1, 0, 3, 2]))
             .add(3, wave_plate(0.5, 0.25))
             .add(2, polarizing_beam_splitter())
             .add(1, polarization_rotator(0.9))
             .add(0, time_delay(2)))
        text = dump_circuit(c)
        again = parse_circuit(text)
        assert again.m == c.m and again.name == c.name
        assert list(again.flatten()) == list(c.flatten())
        assert dump_circuit(again) == text

    def test_parse_diagnostics(self):
        with pytest.raises(StateParseError) as err:
            parse_circuit("{bad json")
        assert err.value.line is not None
        with pytest.raises(StateParseError):
            parse_circuit('{"modes": 2, "components": [{"type": "nope"}]}')
        with pytest.raises(StateParseError):
            parse_circuit('{"modes": 2, "components": [{"type": "bs", '
                          '"R": 7.0}]}')
        with pytest.raises(StateParseError):
            parse_circuit('{"components": []}')
