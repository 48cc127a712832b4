# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Phase factors of the single-ancilla eigenvalue transformation.

Scalar model: on an eigenvector of the signal operator with eigenvalue z the
controlled signal acts on the rotation qubit as D = diag(1, z), its inverse as
diag(1, 1/z), and the sequence

    U(z) = R_0 D R_1 D^dag R_2 ... D R_{2d-1} D^dag R_{2d}

reads out p(z) = <+|U(z)|+>, a Laurent polynomial of degree d.

Since D^dag = z^-1 X D X, z^d U(z) is a product G_0 D G_1 ... D G_2d of plain
single-qubit gates interleaved with D. The G_j are found by stripping one
layer at a time from the column [P; Q], P = z^d p and Q a complementary
polynomial with |P|^2 + |Q|^2 = 1 on the unit circle, then translated back
into the R_j. Each R_j is stored as Z-Y-Z Euler angles, the U(1) parts of all
gates being gathered into a single global phase.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize

from ..numerics import NumericalError, hadamard
from .polynomial import RESIDUAL_GRID, LaurentPolynomial, unit_circle_grid

logger = logging.getLogger(__name__)

CONVENTION = 'zyz'
SUP_NORM_TOLERANCE = 1e-9
MIN_TOLERANCE = 1e-12
POLISH_MAX_SLOTS = 65
FLAT_SPECTRUM_RATIO = 1e-4
ROOT_FINDING_MAX_DEGREE = 128
UNIT_CIRCLE_TOLERANCE = 1e-5

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_HAD = hadamard()


class ConditionViolated(NumericalError):
    """Raise when a polynomial exceeds one in modulus on the unit circle."""

    pass


class NotConverged(NumericalError):
    """Raise when no phase sequence reproduces the polynomial within tolerance."""

    def __init__(self, residual: float) -> None:
        super().__init__(f'phase sequence residual {residual:.3e} above tolerance')
        self.residual = residual


def euler_to_su2(
    beta: ArrayLike, gamma: ArrayLike, delta: ArrayLike
) -> NDArray[np.complex128]:
    """Return Rz(beta) Ry(gamma) Rz(delta), Rz(phi) = diag(e^-i phi/2, e^i phi/2)."""
    beta, gamma, delta = (np.asarray(v, dtype=float) for v in (beta, gamma, delta))
    a = np.exp(-0.5j * (beta + delta)) * np.cos(gamma / 2)
    b = np.exp(0.5j * (beta - delta)) * np.sin(gamma / 2)
    return np.stack(
        [np.stack([a, -b.conj()], axis=-1), np.stack([b, a.conj()], axis=-1)], axis=-2
    )


def su2_decomposition(rotation: ArrayLike) -> tuple[float, float, float, float]:
    """Split a 2x2 unitary into (alpha, beta, gamma, delta).

    rotation = exp(i alpha) Rz(beta) Ry(gamma) Rz(delta)
    """
    matrix = np.asarray(rotation, dtype=np.complex128)
    alpha = float(np.angle(np.linalg.det(matrix))) / 2
    special = matrix * np.exp(-1j * alpha)
    a, b = special[0, 0], special[1, 0]
    gamma = 2 * math.atan2(abs(b), abs(a))
    total = -2 * float(np.angle(a))
    difference = 2 * float(np.angle(b))
    return alpha, (total + difference) / 2, gamma, (total - difference) / 2


@dataclass(frozen=True, eq=False)
class PhaseSequence:
    """Y angles of the 2d + 1 processing rotations plus their Z frames."""

    phases: NDArray[np.float64]
    frames: NDArray[np.float64]
    global_phase: float = 0.0
    convention: str = CONVENTION

    def __post_init__(self) -> None:
        phases = np.asarray(self.phases, dtype=float).reshape(-1)
        frames = np.asarray(self.frames, dtype=float).reshape(-1, 2)
        if len(phases) % 2 == 0:
            raise ValueError(f'expected 2d + 1 phases, got {len(phases)}')
        if frames.shape != (len(phases), 2):
            raise ValueError('each phase needs a (beta, delta) frame')
        object.__setattr__(self, 'phases', phases)
        object.__setattr__(self, 'frames', frames)

    @classmethod
    def from_rotations(cls, rotations: ArrayLike) -> PhaseSequence:
        angles = np.array([su2_decomposition(r) for r in np.asarray(rotations)])
        return cls(
            phases=angles[:, 2],
            frames=angles[:, [1, 3]],
            global_phase=float(np.sum(angles[:, 0])),
        )

    @classmethod
    def from_parameters(cls, parameters: NDArray[np.float64]) -> PhaseSequence:
        slots = (len(parameters) - 1) // 3
        return cls(
            phases=parameters[slots : 2 * slots],
            frames=np.stack([parameters[:slots], parameters[2 * slots : 3 * slots]], axis=1),
            global_phase=float(parameters[-1]),
        )

    def parameters(self) -> NDArray[np.float64]:
        return np.concatenate(
            [self.frames[:, 0], self.phases, self.frames[:, 1], [self.global_phase]]
        )

    def __len__(self) -> int:
        return len(self.phases)

    @property
    def degree(self) -> int:
        return (len(self.phases) - 1) // 2

    def gates(self) -> NDArray[np.complex128]:
        """Processing rotations R_0 ... R_2d, the global phase folded into R_0."""
        rotations = euler_to_su2(self.frames[:, 0], self.phases, self.frames[:, 1])
        rotations[0] = rotations[0] * np.exp(1j * self.global_phase)
        return rotations


def _sequence_products(gates: NDArray[np.complex128], z: NDArray[np.complex128]):
    products = np.broadcast_to(gates[0], (len(z), 2, 2)).copy()
    inverse = 1 / z
    for j in range(1, (len(gates) - 1) // 2 + 1):
        products[:, :, 1] *= z[:, None]
        products = products @ gates[2 * j - 1]
        products[:, :, 1] *= inverse[:, None]
        products = products @ gates[2 * j]
    return products


def evaluate_phase_sequence(sequence: PhaseSequence, z: ArrayLike) -> NDArray[np.complex128]:
    """Return <+|U(z)|+> for each z."""
    points = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    products = _sequence_products(sequence.gates(), points)
    return products.sum(axis=(1, 2)) / 2


def phase_residual(
    sequence: PhaseSequence, p: LaurentPolynomial, gridsize: Optional[int] = None
) -> float:
    if gridsize is None:
        gridsize = max(RESIDUAL_GRID, 4 * (2 * p.degree + 1))
    theta = unit_circle_grid(gridsize)
    readout = evaluate_phase_sequence(sequence, np.exp(1j * theta))
    return float(np.max(np.abs(readout - p.on_circle(theta))))


def _fft_size(degree: int) -> int:
    size = 1 << max(0, (256 * (degree + 1) - 1).bit_length())
    return min(max(size, 2**13), 2**20)


def _outer_factor(s: NDArray[np.float64], degree: int) -> NDArray[np.complex128]:
    # |Q|^2 = s with Q free of zeros in the unit disk: log Q is the analytic
    # completion of log(s) / 2
    size = len(s)
    cepstrum = np.fft.fft(0.5 * np.log(s)) / size
    analytic = np.zeros(size, dtype=np.complex128)
    analytic[0] = cepstrum[0]
    analytic[1 : size // 2] = 2 * cepstrum[1 : size // 2]
    values = np.exp(size * np.fft.ifft(analytic))
    return np.fft.fft(values)[: degree + 1] / size


def _pair_unit_circle_roots(roots: NDArray[np.complex128]) -> list[complex]:
    remaining = list(roots)
    paired = []
    while len(remaining) > 1:
        root = remaining.pop(0)
        nearest = int(np.argmin([abs(root - other) for other in remaining]))
        mean = (root + remaining.pop(nearest)) / 2
        paired.append(mean / abs(mean))
    return paired


def _root_factor(
    p: NDArray[np.complex128], s: NDArray[np.float64], theta: NDArray[np.float64]
) -> NDArray[np.complex128]:
    degree = len(p) - 1
    # z^n (1 - P(z) conj(P)(1/z)) as a polynomial of degree 2n
    product = np.convolve(p, p.conj()[::-1])
    product[degree] -= 1
    roots = np.roots(-product[::-1])
    wanted = len(roots) // 2
    on_circle = roots[np.abs(np.abs(roots) - 1) < UNIT_CIRCLE_TOLERANCE]
    outside = roots[np.abs(roots) >= 1 + UNIT_CIRCLE_TOLERANCE]
    selected = list(outside) + _pair_unit_circle_roots(on_circle)
    if len(selected) != wanted:
        logger.debug('Root split gave %d roots instead of %d', len(selected), wanted)
        selected = list(roots[np.argsort(-np.abs(roots))][:wanted])
    monic = np.poly(selected)[::-1] if selected else np.ones(1, dtype=np.complex128)
    monic = np.pad(monic.astype(np.complex128), (0, degree + 1 - len(monic)))
    peak = int(np.argmax(s))
    z_peak = np.exp(1j * theta[peak])
    scale = math.sqrt(s[peak]) / abs(np.polyval(monic[::-1], z_peak))
    return scale * monic


def complementary_polynomial(p: ArrayLike) -> NDArray[np.complex128]:
    """Return Q of the same degree with |P|^2 + |Q|^2 = 1 on the unit circle."""
    coeffs = np.asarray(p, dtype=np.complex128)
    degree = len(coeffs) - 1
    size = _fft_size(degree)
    theta = unit_circle_grid(size)
    padded = np.zeros(size, dtype=np.complex128)
    padded[: degree + 1] = coeffs
    values = size * np.fft.ifft(padded)
    s = np.clip(1 - np.abs(values) ** 2, 0, None)
    peak = float(np.max(s))
    if peak <= 1e-13:
        return np.zeros(degree + 1, dtype=np.complex128)
    if float(np.min(s)) >= FLAT_SPECTRUM_RATIO * peak:
        return _outer_factor(s, degree)
    if degree <= ROOT_FINDING_MAX_DEGREE:
        return _root_factor(coeffs, s, theta)
    logger.warning(
        'Complement of a degree %d polynomial touching the unit circle; '
        'using a regularized outer factor',
        degree,
    )
    return _outer_factor(np.maximum(s, 1e-14 * peak), degree)


def _strip_layers(
    p: NDArray[np.complex128], q: NDArray[np.complex128]
) -> list[NDArray[np.complex128]]:
    gates = []
    top, bottom = p.copy(), q.copy()
    for _ in range(len(p) - 1):
        head = np.array([top[0], bottom[0]])
        tail = np.array([top[-1], bottom[-1]])
        if np.linalg.norm(head) >= np.linalg.norm(tail):
            norm = np.linalg.norm(head)
            u = head / norm if norm > 0 else np.array([1, 0], dtype=np.complex128)
        else:
            u = np.array([tail[1].conjugate(), -tail[0].conjugate()]) / np.linalg.norm(tail)
        gate = np.array([[u[0], -u[1].conjugate()], [u[1], u[0].conjugate()]])
        gates.append(gate)
        new_top = u[0].conjugate() * top + u[1].conjugate() * bottom
        new_bottom = -u[1] * top + u[0] * bottom
        top, bottom = new_top[:-1], new_bottom[1:]
    last = np.array([top[0], bottom[0]])
    norm = np.linalg.norm(last)
    a, b = last / norm if norm > 0 else (1, 0)
    gates.append(np.array([[a, -np.conjugate(b)], [b, np.conjugate(a)]]))
    return gates


def _rotations_from_layers(
    layers: list[NDArray[np.complex128]], degree: int
) -> NDArray[np.complex128]:
    if degree == 0:
        return np.array([_HAD @ layers[0] @ _HAD])
    last = len(layers) - 1
    rotations = [_HAD @ layers[0]]
    for k in range(1, last):
        rotations.append(layers[k] @ _X if k % 2 else _X @ layers[k])
    rotations.append(_X @ layers[last] @ _HAD)
    return np.array(rotations)


def _polish(
    sequence: PhaseSequence, p: LaurentPolynomial, gridsize: int
) -> PhaseSequence:
    theta = unit_circle_grid(gridsize)
    z = np.exp(1j * theta)
    expected = p.on_circle(theta)

    def residuals(parameters: NDArray[np.float64]) -> NDArray[np.float64]:
        candidate = PhaseSequence.from_parameters(parameters)
        difference = evaluate_phase_sequence(candidate, z) - expected
        return np.concatenate([difference.real, difference.imag])

    result = optimize.least_squares(
        residuals,
        sequence.parameters(),
        method='lm',
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    logger.debug('Polish finished after %d evaluations: %s', result.nfev, result.message)
    return PhaseSequence.from_parameters(result.x)


def compute_phase_factors(p: LaurentPolynomial, tol: float) -> PhaseSequence:
    if tol < MIN_TOLERANCE:
        raise ValueError(f'tolerance {tol} below the supported {MIN_TOLERANCE}')
    sup = p.sup_norm()
    if sup > 1 + SUP_NORM_TOLERANCE:
        raise ConditionViolated(f'|p| reaches {sup:.12g} on the unit circle')
    coeffs = p.analytic_coefficients()
    complement = complementary_polynomial(coeffs)
    layers = _strip_layers(coeffs, complement)
    sequence = PhaseSequence.from_rotations(_rotations_from_layers(layers, p.degree))
    gridsize = max(RESIDUAL_GRID, 4 * len(coeffs))
    residual = phase_residual(sequence, p, gridsize)
    logger.debug('Layer stripping of degree %d: residual %.3e', p.degree, residual)
    if residual > tol and len(sequence) <= POLISH_MAX_SLOTS:
        polished = _polish(sequence, p, RESIDUAL_GRID)
        polished_residual = phase_residual(polished, p, gridsize)
        if polished_residual < residual:
            sequence, residual = polished, polished_residual
        logger.debug('Polished residual %.3e', residual)
    if residual > tol:
        raise NotConverged(residual)
    return sequence
