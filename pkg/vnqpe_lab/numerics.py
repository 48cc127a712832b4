# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Dense complex linear algebra shared by every other module.

Matrices are plain numpy arrays of dtype complex128. Index bits follow the
big-endian convention: qubit 0 is the most significant bit of a row/column
index, so that kron(A, B) places A on the leading qubits.

The routines in here are also the brute-force oracles the approximate
stages get validated against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special
from scipy.stats import unitary_group

logger = logging.getLogger(__name__)

ComplexMatrix = NDArray[np.complex128]
RealVector = NDArray[np.float64]

HERMITIAN_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-10
MAX_DIMENSION = 2**14


class NumericalError(Exception):
    """Base class of the errors raised when a numerical stage fails."""

    pass


class NonHermitian(NumericalError):
    """Raise when a matrix expected to be Hermitian is not."""

    pass


class NotUnitary(NumericalError):
    """Raise when a matrix expected to be unitary is not."""

    pass


class TooLarge(NumericalError):
    """Raise when a dense object would exceed the supported dimension."""

    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m: ArrayLike) -> ComplexMatrix:
    matrix = np.asarray(m, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValueError(f'expected a 2-D matrix, got shape {matrix.shape}')
    if not np.all(np.isfinite(matrix)):
        raise ValueError('matrix has non-finite entries')
    return matrix


def check_hermitian(m: ComplexMatrix, atol: float = HERMITIAN_TOLERANCE) -> None:
    rows, cols = m.shape
    if rows != cols:
        raise NonHermitian(f'matrix is not square: {m.shape}')
    deviation = np.max(np.abs(m - m.conj().T)) if rows else 0.0
    if deviation > atol:
        raise NonHermitian(f'matrix deviates from its adjoint by {deviation:.3e}')


def is_unitary(m: ComplexMatrix, atol: float = UNITARY_TOLERANCE) -> bool:
    rows, cols = m.shape
    if rows != cols:
        return False
    return operator_norm(m.conj().T @ m - np.eye(rows)) <= atol


def hermitian_eigendecomposition(m: ArrayLike) -> Spectrum:
    matrix = as_matrix(m)
    check_hermitian(matrix)
    # symmetrize so that LAPACK sees the exact Hermitian part
    eigenvalues, eigenvectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def matrix_exponential(m: ArrayLike, scale: float) -> ComplexMatrix:
    """Return exp(i * scale * m) for a Hermitian m.

    >>> bool(np.allclose(matrix_exponential(np.diag([1.0, -1.0]), np.pi), -np.eye(2)))
    True
    """
    spectrum = hermitian_eigendecomposition(m)
    v = spectrum.eigenvectors
    phases = np.exp(1j * scale * spectrum.eigenvalues)
    return (v * phases) @ v.conj().T


def operator_norm(m: ArrayLike) -> float:
    matrix = np.asarray(m, dtype=np.complex128)
    if matrix.size == 0:
        return 0.0
    if matrix.ndim == 1:
        return float(np.linalg.norm(matrix))
    return float(np.linalg.norm(matrix, 2))


def bessel_j(order: int, t: float) -> float:
    """Bessel function of the first kind J_order(t) for integer order.

    Negative orders use J_{-k}(t) = (-1)^k J_k(t).

    >>> bessel_j(0, 0.0)
    1.0
    >>> bessel_j(3, 0.0)
    0.0
    """
    order = int(order)
    if order < 0:
        sign = -1.0 if order % 2 else 1.0
        return sign * bessel_j(-order, t)
    return float(special.jv(order, t))


def bessel_j_sequence(max_order: int, t: float) -> RealVector:
    return special.jv(np.arange(max_order + 1), t)


def kron(*factors: ArrayLike) -> ComplexMatrix:
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = np.kron(result, np.asarray(factor, dtype=np.complex128))
    return result


def project_block(
    unitary: ComplexMatrix, g_state: ArrayLike, system_dim: int
) -> ComplexMatrix:
    """Return <G| unitary |G> as a system_dim x system_dim matrix.

    The ancilla register occupies the leading (high order) qubits.
    """
    g = np.asarray(g_state, dtype=np.complex128)
    dim = unitary.shape[0]
    if dim != len(g) * system_dim:
        raise ValueError(
            f'unitary of dim {dim} does not split into {len(g)} x {system_dim}'
        )
    blocks = unitary.reshape(len(g), system_dim, len(g), system_dim)
    return np.einsum('a,aibj,b->ij', g.conj(), blocks, g)


def check_dimension(dim: int, limit: int = MAX_DIMENSION) -> None:
    if dim > limit:
        raise TooLarge(f'dimension {dim} exceeds the supported {limit}')


def random_hermitian(
    dim: int, rng: Union[np.random.Generator, int, None] = None
) -> ComplexMatrix:
    """Gaussian Hermitian matrix normalized to unit operator norm."""
    rng = np.random.default_rng(rng)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (a + a.conj().T) / 2
    norm = operator_norm(h)
    return h / norm if norm > 0 else h


def random_unitary(
    dim: int, rng: Union[np.random.Generator, int, None] = None
) -> ComplexMatrix:
    """Haar distributed unitary."""
    rng = np.random.default_rng(rng)
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def hadamard() -> ComplexMatrix:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def basis_state(index: int, dim: int) -> NDArray[np.complex128]:
    state = np.zeros(dim, dtype=np.complex128)
    state[index] = 1.0
    return state
