# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..blockenc import BlockEncoding, QubitizedEncoding, qubitize
from ..numerics import ComplexMatrix
from .circuit import QetCircuit, apply_circuit, assemble_qet_circuit
from .phases import compute_phase_factors, phase_residual
from .polynomial import (
    RESIDUAL_GRID,
    degree_bound,
    jacobi_anger_coefficients,
    truncation_error,
)

logger = logging.getLogger(__name__)

MAX_DEGREE_BUMPS = 10
MIN_PHASE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SimulationPlan:
    circuit: QetCircuit
    t_prime: float
    degree: int
    truncation: float
    residual: float
    scale: float

    @property
    def d(self) -> int:
        return self.circuit.d

    @property
    def signal_calls(self) -> int:
        return self.circuit.signal_calls


@dataclass(frozen=True)
class SimulationDiagnostics:
    t_prime: float
    degree: int
    d: int
    signal_calls: int
    truncation: float
    residual: float
    scale: float
    postselect_min: float
    postselect_mean: float


def build_simulation_circuit(
    be: BlockEncoding,
    t: float,
    eps: float,
    min_degree: int = 0,
    max_degree_bumps: int = MAX_DEGREE_BUMPS,
) -> SimulationPlan:
    """Build the QET circuit whose |+, G'> block approximates exp(-i t H).

    The Jacobi-Anger polynomial is damped by (1 - eps/4) so it stays below one
    on the unit circle; the truncation order is raised until the undamped
    series is within eps/8 of the exponential.
    """
    if not 0 < eps < 1:
        raise ValueError(f'eps must lie in (0, 1), got {eps}')
    w = qubitize(be)
    t_prime = w.beta * t
    damping = eps / 4
    degree = max(degree_bound(abs(t_prime), eps), min_degree)
    for bump in range(max_degree_bumps + 1):
        series = jacobi_anger_coefficients(t_prime, degree)
        gridsize = max(RESIDUAL_GRID, 4 * (series.degree + 1))
        truncation = truncation_error(series, t_prime, gridsize)
        if truncation <= damping / 2:
            break
        if bump == max_degree_bumps:
            logger.warning(
                'Truncation error %.3e still above %.3e at order %d',
                truncation,
                damping / 2,
                degree,
            )
            break
        logger.debug('Truncation %.3e at order %d, raising the order', truncation, degree)
        degree += 1
    scale = 1 - damping
    polynomial = series.scaled(scale)
    tolerance = max(eps / 8, MIN_PHASE_TOLERANCE)
    phases = compute_phase_factors(polynomial, tolerance)
    residual = phase_residual(phases, polynomial)
    logger.debug(
        "Simulation circuit for t'=%.6g: order %d, %d signal calls, residual %.3e",
        t_prime,
        degree,
        2 * phases.degree,
        residual,
    )
    circuit = assemble_qet_circuit(w, phases)
    return SimulationPlan(
        circuit=circuit,
        t_prime=t_prime,
        degree=degree,
        truncation=truncation,
        residual=residual,
        scale=scale,
    )


def signal_input_states(w: QubitizedEncoding) -> ComplexMatrix:
    """Columns |+>|G'>|i> for each system basis state i."""
    plus = np.ones(2, dtype=np.complex128) / np.sqrt(2)
    flag = np.kron(plus, w.g_state).reshape(-1, 1)
    return np.kron(flag, np.eye(w.system_dim, dtype=np.complex128))


def postselected_block(c: QetCircuit, states: ArrayLike) -> ComplexMatrix:
    """Apply the circuit and project the flag registers back onto <+, G'|."""
    w = c.signal
    images = apply_circuit(c, states)
    plus = np.ones(2, dtype=np.complex128) / np.sqrt(2)
    flag = np.kron(plus, w.g_state)
    shaped = images.reshape(len(flag), w.system_dim, -1)
    return np.einsum('a,ask->sk', flag.conj(), shaped)


def postselect_probability(simulation_map: ArrayLike, psi: ArrayLike) -> float:
    """Probability of the |+, G'> branch for system state psi."""
    vector = np.asarray(psi, dtype=np.complex128)
    image = np.asarray(simulation_map) @ vector
    return float(np.vdot(image, image).real / np.vdot(vector, vector).real)


def hamiltonian_simulation(
    be: BlockEncoding,
    t: float,
    eps: float,
    min_degree: int = 0,
    max_degree_bumps: int = MAX_DEGREE_BUMPS,
) -> tuple[ComplexMatrix, SimulationDiagnostics]:
    plan = build_simulation_circuit(be, t, eps, min_degree, max_degree_bumps)
    simulation_map = postselected_block(plan.circuit, signal_input_states(plan.circuit.signal))
    branch = np.sum(np.abs(simulation_map) ** 2, axis=0)
    diagnostics = SimulationDiagnostics(
        t_prime=plan.t_prime,
        degree=plan.degree,
        d=plan.d,
        signal_calls=plan.signal_calls,
        truncation=plan.truncation,
        residual=plan.residual,
        scale=plan.scale,
        postselect_min=float(np.min(branch)),
        postselect_mean=float(np.mean(branch)),
    )
    logger.info(
        'Simulated t=%.6g with %d signal calls, branch probability >= %.6f',
        t,
        plan.signal_calls,
        diagnostics.postselect_min,
    )
    return simulation_map, diagnostics
