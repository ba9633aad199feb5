"""Downhill-simplex minimization and the variational energy harness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analysis import (LogicalEncoding, QubitOperator, Rule, expectation,
                       logical_statevector)
from .backends.slos import slos_amplitudes
from .circuit import Circuit, compute_unitary
from .fock import FockState

# classic Nelder-Mead coefficients
_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5


def nelder_mead(f: Callable[[np.ndarray], float], x0: Sequence[float],
                max_iter: int = 1000, xtol: float = 1e-8,
                ftol: float = 1e-8) -> tuple[np.ndarray, float]:
    """Minimize ``f`` from ``x0`` with the classic simplex method.

    Stops when the simplex max-norm diameter falls below ``xtol``, the
    value spread below ``ftol``, or after ``max_iter`` iterations.
    Returns the best vertex and its value.
    """
    x0 = np.asarray(x0, dtype=float)
    f0 = float(f(x0))
    if not math.isfinite(f0):
        raise ValueError(f"objective is not finite at the start point: {f0}")
    if max_iter <= 0:
        return x0, f0
    k = len(x0)
    simplex = [x0]
    for i in range(k):
        step = 0.05 * abs(x0[i]) if x0[i] != 0.0 else 0.00025
        vertex = x0.copy()
        vertex[i] += step
        simplex.append(vertex)
    values = [f0] + [float(f(v)) for v in simplex[1:]]

    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        diameter = max(np.abs(v - simplex[0]).max() for v in simplex[1:])
        # relative spread: an absolute check can fire on a wide simplex
        # whose vertices straddle the minimum symmetrically
        spread = values[-1] - values[0]
        if diameter < xtol or \
                spread < ftol * (abs(values[0]) + abs(values[-1]) + 1e-12):
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = centroid + _REFLECT * (centroid - worst)
        f_r = float(f(reflected))
        if f_r < values[0]:
            expanded = centroid + _EXPAND * (centroid - worst)
            f_e = float(f(expanded))
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
        elif f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
        else:
            if f_r < values[-1]:
                contracted = centroid + _CONTRACT * (reflected - centroid)
            else:
                contracted = centroid + _CONTRACT * (worst - centroid)
            f_c = float(f(contracted))
            if f_c < min(f_r, values[-1]):
                simplex[-1], values[-1] = contracted, f_c
            else:
                best = simplex[0]
                simplex = [best] + [best + _SHRINK * (v - best)
                                    for v in simplex[1:]]
                values = [values[0]] + [float(f(v)) for v in simplex[1:]]
    best = int(np.argmin(values))
    return simplex[best], values[best]


@dataclass
class VqeResult:
    energy: float
    params: np.ndarray
    restart_energies: list[float]
    evaluations: list[float]


def vqe_run(ansatz: Callable[[np.ndarray], Circuit], n_params: int,
            encoding: LogicalEncoding, hamiltonian: QubitOperator,
            input_state: FockState, rule: Rule | None = None,
            seed: int = 0, restarts: int = 5, max_iter: int = 400,
            xtol: float = 1e-6, ftol: float = 1e-10,
            record_evaluations: bool = False) -> VqeResult:
    """Minimize the post-selected Rayleigh quotient over circuit phases.

    ``ansatz`` binds a parameter vector to a circuit; each evaluation
    composes the unitary, computes the exact output state, post-selects it
    onto the encoded qubits and takes the operator expectation.  Restarts
    draw uniform starts in [0, 2 pi) from a seeded generator and keep the
    best result (ties resolved by restart order).
    """
    rng = np.random.default_rng(seed)
    history: list[float] = []

    def energy(phis: np.ndarray) -> float:
        u = compute_unitary(ansatz(phis))
        sv = slos_amplitudes(u, input_state)
        vec = logical_statevector(sv, encoding, rule)
        value = expectation(vec, hamiltonian)
        if record_evaluations:
            history.append(value)
        return value

    best: tuple[np.ndarray, float] | None = None
    restart_energies = []
    for _ in range(max(1, restarts)):
        start = rng.uniform(0.0, 2.0 * math.pi, n_params)
        x, fx = nelder_mead(energy, start, max_iter=max_iter,
                            xtol=xtol, ftol=ftol)
        restart_energies.append(fx)
        if best is None or fx < best[1]:
            best = (x, fx)
    assert best is not None
    return VqeResult(best[1], best[0], restart_energies, history)
