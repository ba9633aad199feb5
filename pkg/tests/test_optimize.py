"""Simplex minimizer and the variational energy loop."""

import numpy as np
import pytest

from photonsim.analysis import QubitOperator
from photonsim.gallery import (VQE_ENCODING, VQE_INPUT, VQE_N_PARAMS,
                               VQE_RULE, vqe_ansatz)
from photonsim.optimize import nelder_mead, vqe_run

from conftest import random_complex


class TestNelderMead:
    def test_quadratic_bowl(self):
        x, fx = nelder_mead(lambda v: (v[0] - 3.0) ** 2, [0.0],
                            max_iter=400, xtol=1e-7, ftol=1e-14)
        assert abs(x[0] - 3.0) < 1e-4
        assert fx < 1e-8

    def test_rosenbrock(self):
        def rosenbrock(v):
            return (1 - v[0]) ** 2 + 100 * (v[1] - v[0] ** 2) ** 2

        x, fx = nelder_mead(rosenbrock, [-1.2, 1.0], max_iter=5000,
                            xtol=1e-10, ftol=1e-14)
        assert np.abs(x - [1.0, 1.0]).max() < 1e-3

    def test_zero_iterations_returns_start(self):
        x, fx = nelder_mead(lambda v: v[0] ** 2, [2.0], max_iter=0)
        assert x[0] == 2.0 and fx == 4.0

    def test_non_finite_start_rejected(self):
        with pytest.raises(ValueError):
            nelder_mead(lambda v: float("nan"), [0.0])

    def test_multivariate_quadratic(self):
        target = np.array([0.5, -1.5, 2.0])
        x, _ = nelder_mead(lambda v: ((v - target) ** 2).sum(),
                           np.zeros(3), max_iter=2000, xtol=1e-9, ftol=1e-15)
        assert np.abs(x - target).max() < 1e-3


def random_two_qubit_operator(rng) -> QubitOperator:
    raw = random_complex(rng, 4)
    return QubitOperator(raw + raw.conj().T)


class TestVqe:
    def test_sigma_z_ground_energy(self):
        h = QubitOperator.from_paulis([(1.0, "ZI")])
        result = vqe_run(vqe_ansatz, VQE_N_PARAMS, VQE_ENCODING, h,
                         VQE_INPUT, VQE_RULE, seed=1, restarts=3,
                         max_iter=300)
        assert abs(result.energy - (-1.0)) < 1e-3

    def test_bell_projector_reaches_zero(self):
        bell = np.zeros((4, 4))
        bell[0, 0] = bell[0, 3] = bell[3, 0] = bell[3, 3] = 0.5
        h = QubitOperator(np.eye(4) - bell)
        result = vqe_run(vqe_ansatz, VQE_N_PARAMS, VQE_ENCODING, h,
                         VQE_INPUT, VQE_RULE, seed=2, restarts=3,
                         max_iter=300)
        assert abs(result.energy) < 1e-3

    def test_variational_bound_every_evaluation(self, rng):
        h = random_two_qubit_operator(rng)
        ground = float(np.linalg.eigvalsh(h.matrix)[0])
        result = vqe_run(vqe_ansatz, VQE_N_PARAMS, VQE_ENCODING, h,
                         VQE_INPUT, VQE_RULE, seed=3, restarts=2,
                         max_iter=150, record_evaluations=True)
        assert result.evaluations
        assert all(e >= ground - 1e-9 for e in result.evaluations)
        assert result.energy >= ground - 1e-9

    def test_random_operator_converges(self, rng):
        h = random_two_qubit_operator(rng)
        ground = float(np.linalg.eigvalsh(h.matrix)[0])
        result = vqe_run(vqe_ansatz, VQE_N_PARAMS, VQE_ENCODING, h,
                         VQE_INPUT, VQE_RULE, seed=4, restarts=5,
                         max_iter=400)
        assert result.energy - ground < 1e-3
