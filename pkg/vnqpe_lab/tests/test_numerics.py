# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import math
import unittest

import numpy as np
import pytest
from hamcrest import assert_that, calling, close_to, contains_exactly, raises

from ..numerics import (
    NonHermitian,
    bessel_j,
    hermitian_eigendecomposition,
    kron,
    matrix_exponential,
    operator_norm,
    project_block,
    random_hermitian,
    random_unitary,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)


class TestHermitianEigendecomposition(unittest.TestCase):
    def test_pauli_z(self) -> None:
        spectrum = hermitian_eigendecomposition(Z)

        assert_that(spectrum.eigenvalues.tolist(), contains_exactly(-1.0, 1.0))

    def test_two_by_two_closed_form(self) -> None:
        spectrum = hermitian_eigendecomposition(0.5 * Z + 0.25 * X)

        root = math.sqrt(0.3125)
        assert_that(spectrum.eigenvalues[0], close_to(-root, 1e-12))
        assert_that(spectrum.eigenvalues[1], close_to(root, 1e-12))

    def test_identity_gives_orthonormal_basis(self) -> None:
        spectrum = hermitian_eigendecomposition(I2)

        assert_that(spectrum.eigenvalues.tolist(), contains_exactly(1.0, 1.0))
        v = spectrum.eigenvectors
        assert_that(operator_norm(v.conj().T @ v - I2), close_to(0, 1e-12))

    def test_non_hermitian_is_rejected(self) -> None:
        m = np.array([[0, 1], [0, 0]], dtype=complex)

        assert_that(
            calling(hermitian_eigendecomposition).with_args(m), raises(NonHermitian)
        )

    def test_reconstruction_on_random_matrices(self) -> None:
        rng = np.random.default_rng(7)
        for dim in (1, 2, 3, 8, 16):
            m = random_hermitian(dim, rng)
            spectrum = hermitian_eigendecomposition(m)

            v = spectrum.eigenvectors
            assert_that(operator_norm(spectrum.reconstruct() - m), close_to(0, 1e-10))
            assert_that(
                operator_norm(v.conj().T @ v - np.eye(dim)), close_to(0, 1e-10)
            )
            assert np.all(np.diff(spectrum.eigenvalues) >= 0)


class TestMatrixExponential(unittest.TestCase):
    def test_diagonal(self) -> None:
        u = matrix_exponential(Z, math.pi)

        assert_that(operator_norm(u + I2), close_to(0, 1e-12))

    def test_zero_scale_is_identity(self) -> None:
        m = random_hermitian(4, 3)

        assert_that(operator_norm(matrix_exponential(m, 0.0) - np.eye(4)), close_to(0, 1e-12))

    def test_half_pi_x(self) -> None:
        u = matrix_exponential(X, math.pi / 2)

        assert_that(operator_norm(u - 1j * X), close_to(0, 1e-12))

    def test_unitarity_and_group_law(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(10):
            m = 3 * random_hermitian(8, rng)
            s, t = rng.uniform(-5, 5, size=2)
            us = matrix_exponential(m, s)
            ut = matrix_exponential(m, t)

            assert_that(operator_norm(us.conj().T @ us - np.eye(8)), close_to(0, 1e-10))
            assert_that(
                operator_norm(us @ ut - matrix_exponential(m, s + t)), close_to(0, 1e-9)
            )


class TestOperatorNorm(unittest.TestCase):
    def test_pauli(self) -> None:
        assert_that(operator_norm(Z), close_to(1.0, 1e-12))

    def test_zero(self) -> None:
        assert_that(operator_norm(np.zeros((3, 3))), close_to(0.0, 0))

    def test_matches_largest_eigenvalue(self) -> None:
        assert_that(operator_norm(0.5 * Z + 0.25 * X), close_to(math.sqrt(0.3125), 1e-12))


class TestBessel(unittest.TestCase):
    def test_values_at_origin(self) -> None:
        assert_that(bessel_j(0, 0.0), close_to(1.0, 0))
        assert_that(bessel_j(3, 0.0), close_to(0.0, 0))

    def test_j0_of_one(self) -> None:
        assert_that(bessel_j(0, 1.0), close_to(0.765197686557966, 1e-15))

    def test_negative_order(self) -> None:
        assert_that(bessel_j(-3, 2.5), close_to(-bessel_j(3, 2.5), 1e-15))
        assert_that(bessel_j(-4, 2.5), close_to(bessel_j(4, 2.5), 1e-15))

    def test_matches_power_series(self) -> None:
        for order in (0, 1, 5, 12):
            for t in (0.3, 2.0, 7.5):
                series = sum(
                    (-1) ** m
                    / (math.factorial(m) * math.factorial(m + order))
                    * (t / 2) ** (2 * m + order)
                    for m in range(60)
                )
                assert_that(bessel_j(order, t), close_to(series, 1e-12))


@pytest.mark.parametrize('t', [0.1, 1.0, 7.3, 25.0, 50.0])
def test_bessel_recurrence(t: float) -> None:
    for k in range(1, 51):
        lhs = bessel_j(k - 1, t) + bessel_j(k + 1, t)
        rhs = 2 * k / t * bessel_j(k, t)

        assert_that(lhs, close_to(rhs, 1e-10))


@pytest.mark.parametrize('t', [0.5, 4.0, 30.0])
def test_bessel_normalization(t: float) -> None:
    bound = math.ceil(math.e * t) + 40
    total = sum(bessel_j(k, t) ** 2 for k in range(-bound, bound + 1))

    assert total >= 1 - 1e-10


def test_kron_identity_factor() -> None:
    assert np.allclose(kron(I2, Z), np.diag([1, -1, 1, -1]))


def test_kron_diagonal_product() -> None:
    assert np.allclose(kron(Z, Z), np.diag([1, -1, -1, 1]))


def test_kron_bit_flip_on_leading_qubit_convention() -> None:
    ket_00 = np.array([1, 0, 0, 0], dtype=complex)

    assert np.allclose(kron(X, X) @ ket_00, [0, 0, 0, 1])
    # qubit 0 is the most significant bit
    assert np.allclose(kron(X, I2) @ ket_00, [0, 0, 1, 0])


def test_project_block_reads_top_left_block() -> None:
    u = random_unitary(8, 5)
    g = np.array([1, 0], dtype=complex)

    assert np.allclose(project_block(u, g, 4), u[:4, :4])
