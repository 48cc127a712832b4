# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Single-ancilla QET circuits.

The circuit acts on [rotation qubit | qubitized register], the rotation qubit
being the most significant one, and reads

    R_0 CW R_1 CW^dag R_2 ... CW R_{2d-1} CW^dag R_{2d}

where CW applies the qubitization iterate when the rotation qubit is |1>.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from ..blockenc import QubitizedEncoding
from ..numerics import ComplexMatrix, check_dimension, random_hermitian
from .phases import PhaseSequence

logger = logging.getLogger(__name__)


class BadPhaseCount(ValueError):
    """Raise when a circuit is given an even number of phases."""

    pass


@dataclass(frozen=True)
class ErrorInjection:
    eps_w: float
    eps_r: float
    seed: int = 0


@dataclass(frozen=True, eq=False)
class QetCircuit:
    phases: PhaseSequence
    signal: QubitizedEncoding
    error_injection: Optional[ErrorInjection] = None

    @property
    def d(self) -> int:
        return self.phases.degree

    @property
    def signal_calls(self) -> int:
        return 2 * self.d

    @property
    def dim(self) -> int:
        return 2 * self.signal.dim

    @property
    def qubits(self) -> int:
        return self.signal.qubits + 1

    def with_injection(self, injection: Optional[ErrorInjection]) -> QetCircuit:
        return QetCircuit(self.phases, self.signal, injection)


def assemble_qet_circuit(
    w: QubitizedEncoding,
    phases: Union[PhaseSequence, ArrayLike],
    error_injection: Optional[ErrorInjection] = None,
) -> QetCircuit:
    """Bind a phase sequence to a qubitized signal.

    Plain angle sequences are read as Y rotations with no Z frames.
    """
    if not isinstance(phases, PhaseSequence):
        angles = np.asarray(phases, dtype=float).reshape(-1)
        if len(angles) % 2 == 0:
            raise BadPhaseCount(f'expected an odd number of phases, got {len(angles)}')
        phases = PhaseSequence(phases=angles, frames=np.zeros((len(angles), 2)))
    logger.debug(
        'Assembled QET circuit: %d signal calls on %d qubits', 2 * phases.degree, w.qubits + 1
    )
    return QetCircuit(phases=phases, signal=w, error_injection=error_injection)


def error_propagation_bound(c: QetCircuit, eps_w: float, eps_r: float) -> float:
    return c.signal_calls * eps_w + (c.signal_calls + 1) * eps_r


def _injected_factors(
    c: QetCircuit,
) -> tuple[list[ComplexMatrix], list[ComplexMatrix]]:
    """Return the per-slot perturbations e^{i eps G} for signals and rotations."""
    injection = c.error_injection
    assert injection is not None
    rng = np.random.default_rng(injection.seed)
    signal_kicks = []
    for _ in range(c.signal_calls):
        generator = random_hermitian(c.dim, rng)
        signal_kicks.append(linalg.expm(1j * injection.eps_w * generator))
    rotation_kicks = []
    for _ in range(len(c.phases)):
        generator = random_hermitian(2, rng)
        rotation_kicks.append(linalg.expm(1j * injection.eps_r * generator))
    return signal_kicks, rotation_kicks


def evaluate_circuit(c: QetCircuit) -> ComplexMatrix:
    """Return the dense unitary of the circuit, injected errors included."""
    check_dimension(c.dim)
    half = c.signal.dim
    identity = np.eye(half, dtype=np.complex128)
    iterate = c.signal.iterate
    controlled = linalg.block_diag(identity, iterate)
    controlled_adjoint = linalg.block_diag(identity, iterate.conj().T)
    rotations = list(c.phases.gates())
    signal_kicks: list[ComplexMatrix] = []
    if c.error_injection is not None:
        signal_kicks, rotation_kicks = _injected_factors(c)
        rotations = [r @ kick for r, kick in zip(rotations, rotation_kicks)]

    def rotation(j: int) -> ComplexMatrix:
        return np.kron(rotations[j], identity)

    def signal(slot: int, adjoint: bool) -> ComplexMatrix:
        gate = controlled_adjoint if adjoint else controlled
        return gate @ signal_kicks[slot] if signal_kicks else gate

    unitary = rotation(0)
    for j in range(1, c.d + 1):
        unitary = unitary @ signal(2 * j - 2, adjoint=False) @ rotation(2 * j - 1)
        unitary = unitary @ signal(2 * j - 1, adjoint=True) @ rotation(2 * j)
    return unitary


def apply_circuit(c: QetCircuit, states: ArrayLike) -> NDArray[np.complex128]:
    """Apply the circuit to state vectors stacked along the trailing axis.

    The controlled iterate only ever touches the |1> half of the rotation
    qubit, so no operator on the full register is formed.
    """
    x = np.asarray(states, dtype=np.complex128)
    if x.shape[0] != c.dim:
        raise ValueError(f'states of leading size {x.shape[0]}, expected {c.dim}')
    if c.error_injection is not None:
        return (evaluate_circuit(c) @ x.reshape(c.dim, -1)).reshape(x.shape)
    state = x.reshape(2, c.signal.dim, -1).copy()
    gates = c.phases.gates()
    for k in range(len(gates) - 1, 0, -1):
        state = np.einsum('ab,bsk->ask', gates[k], state)
        if k % 2 == 0:
            state[1] = c.signal.apply_iterate_adjoint(state[1])
        else:
            state[1] = c.signal.apply_iterate(state[1])
    state = np.einsum('ab,bsk->ask', gates[0], state)
    return state.reshape(x.shape)
