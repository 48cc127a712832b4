# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import unittest
from unittest.mock import Mock

import numpy as np
import pytest
from hamcrest import (
    assert_that,
    calling,
    close_to,
    equal_to,
    greater_than_or_equal_to,
    less_than_or_equal_to,
    raises,
)

from ...blockenc import lcu_block_encoding, qubitize
from ...numerics import TooLarge, hermitian_eigendecomposition, is_unitary, operator_norm
from ...pauli import lcp_to_matrix, parse_lcp
from ..circuit import (
    BadPhaseCount,
    ErrorInjection,
    apply_circuit,
    assemble_qet_circuit,
    error_propagation_bound,
    evaluate_circuit,
)
from ..phases import PhaseSequence, evaluate_phase_sequence
from ..simulation import postselected_block, signal_input_states

HAMILTONIAN = '0.5 Z\n0.25 X'


def _signal():
    return qubitize(lcu_block_encoding(parse_lcp(HAMILTONIAN)))


def _random_sequence(pairs: int, seed: int) -> PhaseSequence:
    rng = np.random.default_rng(seed)
    slots = 2 * pairs + 1
    return PhaseSequence(
        phases=rng.uniform(0, np.pi, slots),
        frames=rng.uniform(-np.pi, np.pi, (slots, 2)),
        global_phase=float(rng.uniform(-np.pi, np.pi)),
    )


class TestAssemble(unittest.TestCase):
    def test_even_phase_count(self) -> None:
        assert_that(
            calling(assemble_qet_circuit).with_args(_signal(), [0.1, 0.2]),
            raises(BadPhaseCount),
        )

    def test_plain_angles_are_y_rotations(self) -> None:
        circuit = assemble_qet_circuit(_signal(), [0.1, 0.2, 0.3])

        assert_that(circuit.d, equal_to(1))
        assert_that(circuit.signal_calls, equal_to(2))
        assert np.allclose(circuit.phases.frames, 0)

    def test_single_phase_is_one_rotation(self) -> None:
        w = _signal()
        sequence = _random_sequence(0, 2)
        circuit = assemble_qet_circuit(w, sequence)

        unitary = evaluate_circuit(circuit)

        expected = np.kron(sequence.gates()[0], np.eye(w.dim))
        assert np.allclose(unitary, expected)

    def test_zero_phases_cancel_the_signal(self) -> None:
        circuit = assemble_qet_circuit(_signal(), np.zeros(3))

        assert np.allclose(evaluate_circuit(circuit), np.eye(circuit.dim))

    def test_one_pair_structure(self) -> None:
        w = _signal()
        sequence = _random_sequence(1, 4)
        circuit = assemble_qet_circuit(w, sequence)
        identity = np.eye(w.dim)
        zero = np.zeros_like(identity)
        controlled = np.block([[identity, zero], [zero, w.iterate]])
        gates = [np.kron(g, identity) for g in sequence.gates()]

        expected = gates[0] @ controlled @ gates[1] @ controlled.conj().T @ gates[2]

        assert np.allclose(evaluate_circuit(circuit), expected)


class TestEvaluate(unittest.TestCase):
    def test_unitary(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(3, 5))

        assert is_unitary(evaluate_circuit(circuit))

    def test_too_large(self) -> None:
        circuit = assemble_qet_circuit(Mock(dim=2**14, qubits=15), np.zeros(1))

        assert_that(calling(evaluate_circuit).with_args(circuit), raises(TooLarge))

    def test_null_injection_is_clean(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(2, 6))
        injected = circuit.with_injection(ErrorInjection(0.0, 0.0, seed=1))

        assert np.allclose(evaluate_circuit(injected), evaluate_circuit(circuit), atol=1e-14)

    def test_injection_is_deterministic(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(1, 7))
        injection = ErrorInjection(1e-3, 1e-4, seed=9)

        first = evaluate_circuit(circuit.with_injection(injection))
        second = evaluate_circuit(circuit.with_injection(injection))

        assert np.array_equal(first, second)

    def test_bound_value(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(2, 8))

        assert_that(error_propagation_bound(circuit, 1e-3, 1e-4), close_to(4.5e-3, 1e-15))


class TestApply(unittest.TestCase):
    def test_matches_dense_product(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(3, 10))
        rng = np.random.default_rng(10)
        states = rng.normal(size=(circuit.dim, 3)) + 1j * rng.normal(size=(circuit.dim, 3))

        assert np.allclose(apply_circuit(circuit, states), evaluate_circuit(circuit) @ states)

    def test_single_vector(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(1, 11))
        state = np.zeros(circuit.dim, dtype=complex)
        state[3] = 1

        assert np.allclose(apply_circuit(circuit, state), evaluate_circuit(circuit)[:, 3])

    def test_injected_circuit_uses_dense_product(self) -> None:
        circuit = assemble_qet_circuit(_signal(), _random_sequence(1, 12))
        injected = circuit.with_injection(ErrorInjection(1e-2, 1e-2, seed=3))
        state = np.eye(circuit.dim)[:, :2]

        assert np.allclose(apply_circuit(injected, state), evaluate_circuit(injected)[:, :2])

    def test_wrong_size(self) -> None:
        circuit = assemble_qet_circuit(_signal(), np.zeros(3))

        assert_that(calling(apply_circuit).with_args(circuit, np.zeros(5)), raises(ValueError))


def test_postselected_block_follows_scalar_model() -> None:
    w = _signal()
    sequence = _random_sequence(3, 13)
    circuit = assemble_qet_circuit(w, sequence)
    spectrum = hermitian_eigendecomposition(lcp_to_matrix(parse_lcp(HAMILTONIAN)))

    block = postselected_block(circuit, signal_input_states(w))

    theta = np.arccos(spectrum.eigenvalues / w.beta)
    readout = (
        evaluate_phase_sequence(sequence, np.exp(1j * theta))
        + evaluate_phase_sequence(sequence, np.exp(-1j * theta))
    ) / 2
    v = spectrum.eigenvectors
    expected = (v * readout) @ v.conj().T
    assert_that(operator_norm(block - expected), less_than_or_equal_to(1e-10))


@pytest.mark.parametrize('signal_calls', [2, 4, 8])
@pytest.mark.parametrize('eps_r', [0.0, 1e-4])
def test_error_propagation(signal_calls: int, eps_r: float) -> None:
    eps_w = 1e-3
    circuit = assemble_qet_circuit(_signal(), _random_sequence(signal_calls // 2, signal_calls))
    clean = evaluate_circuit(circuit)
    bound = error_propagation_bound(circuit, eps_w, eps_r)

    measured = [
        operator_norm(
            evaluate_circuit(circuit.with_injection(ErrorInjection(eps_w, eps_r, seed=seed)))
            - clean
        )
        for seed in range(50)
    ]

    assert_that(max(measured), less_than_or_equal_to(bound))
    assert_that(max(measured), greater_than_or_equal_to(0.1 * bound))
