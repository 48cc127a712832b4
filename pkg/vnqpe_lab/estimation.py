# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""von Neumann eigenvalue estimation with a QET time evolution.

A discretized pointer register of r qubits starts in the uniform state, the
coupled Hamiltonian H (x) p with p|z> = (z / 2^r)|z> is simulated for time t,
and the inverse Fourier transform on the pointer concentrates the
probability near x = lambda t / 2 pi for each eigenvalue lambda of H. The
register order is [rotation qubit | encoding ancillas | system | pointer].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .blockenc import BlockEncoding, DimMismatch, lcu_block_encoding
from .numerics import (
    ComplexMatrix,
    NumericalError,
    as_matrix,
    basis_state,
    check_hermitian,
    hadamard,
    hermitian_eigendecomposition,
    matrix_exponential,
)
from .pauli import (
    MAX_POINTER_QUBITS,
    BadRange,
    LCPHamiltonian,
    couple_pointer,
    lcp_to_matrix,
    momentum_operator,
)
from .qet.circuit import apply_circuit
from .qet.polynomial import degree_bound
from .qet.simulation import MAX_DEGREE_BUMPS, build_simulation_circuit
from .util import ceil_tolerant

logger = logging.getLogger(__name__)

POSTSELECT_FLOOR = 1e-12
DEGENERACY_TOLERANCE = 1e-9
KAPPA_TOLERANCE = 1e-12

Mode = Literal['qet', 'exact']


class ParameterError(ValueError):
    """Raise when estimation parameters are out of range."""

    pass


class InfeasibleDelta(ParameterError):
    """Raise when the failure probability sits below the encoding error floor."""

    def __init__(self, floor: float, delta: float) -> None:
        super().__init__(f'delta {delta:.6g} does not exceed the floor {floor:.6g}')
        self.floor = floor
        self.delta = delta


class PostselectFailed(NumericalError):
    """Raise when the flag registers are (almost) never found in |+, G'>."""

    pass


class BadBand(ValueError):
    """Raise when the Fourier transform band is outside [1, r]."""

    pass


@dataclass(frozen=True)
class QpeParams:
    r: int
    t: float
    t_prime: float = 0.0
    k: int = 2
    d: int = 1
    degree: int = 0
    delta: float = 0.5
    eps_vN: float = 0.0
    delta_k: float = 0.0
    beta: float = 1.0
    eps_qet: float = 0.0
    eps_be: float = 0.0
    eps_r: float = 0.0
    eps_hs: float = 0.0
    delta_floor: float = 0.0

    def __post_init__(self) -> None:
        if not 1 <= self.r <= MAX_POINTER_QUBITS:
            raise ParameterError(f'pointer size {self.r} outside [1, {MAX_POINTER_QUBITS}]')
        if self.t <= 0:
            raise ParameterError(f'evolution time must be positive, got {self.t}')

    @property
    def pointer_dim(self) -> int:
        return 2**self.r

    @property
    def eps_budget(self) -> tuple[float, float, float, float]:
        return self.eps_qet, self.eps_be, self.eps_r, self.eps_hs


def pointer_qubits(delta_k: float, eps_vN: float) -> int:
    """Smallest pointer resolving eps_vN against the gap, at least one qubit.

    >>> pointer_qubits(0.5, 0.05)
    5
    >>> pointer_qubits(0.5, 0.5)
    1
    """
    if delta_k <= 0 or eps_vN <= 0:
        raise ParameterError('gap and precision must be positive')
    if eps_vN > delta_k:
        raise ParameterError(f'precision {eps_vN} is coarser than the gap {delta_k}')
    return max(1, 1 + ceil_tolerant(math.log2(delta_k / eps_vN)))


def delta_floor_for(r: int, t_prime: float, eps_be: float) -> float:
    """Smallest failure probability reachable with an encoding of accuracy eps_be.

    The signal-call count is the one a simulation to accuracy eps_be needs,
    not the one of the QET budget.
    """
    if eps_be < 0:
        raise ParameterError('available encoding error must be nonnegative')
    if eps_be == 0:
        return 0.0
    degree = degree_bound(t_prime, eps_be) if eps_be < 1 else 0
    return 6 * 4**r * (2 * degree + 2) * eps_be


def select_parameters(
    delta_k: float,
    eps_vN: float,
    delta: float,
    beta: float,
    eps_be_available: float = 0.0,
    rotation_free: bool = False,
    norm_h: Optional[float] = None,
    pointer_size: Optional[int] = None,
    time: Optional[float] = None,
) -> QpeParams:
    """Solve for pointer size, time, degree and error budgets.

    beta is the subnormalization of the encoding of H (x) p that the
    simulation stage will qubitize. pointer_size and time replace the
    solved r and t; the budgets, degree and floor follow them.
    """
    if not 0 < delta < 1:
        raise ParameterError(f'delta must lie in (0, 1), got {delta}')
    if beta <= 0:
        raise ParameterError(f'beta must be positive, got {beta}')
    if eps_be_available < 0:
        raise ParameterError('available encoding error must be nonnegative')
    r = pointer_qubits(delta_k, eps_vN) if pointer_size is None else pointer_size
    if not 1 <= r <= MAX_POINTER_QUBITS:
        raise ParameterError(f'pointer size {r} outside [1, {MAX_POINTER_QUBITS}]')
    k = ceil_tolerant(3 / (2 * delta)) + 1
    t = 2 * math.pi * max(k / delta_k, 1 / eps_vN) if time is None else time
    if t <= 0:
        raise ParameterError(f'evolution time must be positive, got {t}')
    if 2**r * 2 * math.pi / t < 2 * beta:
        logger.warning(
            'Pointer range %.6g is narrower than the spectral width %.6g; estimates may alias',
            2**r * 2 * math.pi / t,
            2 * beta,
        )
    eps_hs = delta / (3 * 4**r)
    eps_qet = eps_hs / 2 if rotation_free else eps_hs / 3
    t_prime = max(beta * t, math.log(1 / eps_qet))
    degree = degree_bound(t_prime, eps_qet)
    d = 2 * degree + 1
    if rotation_free:
        eps_r = 0.0
        norm = beta if norm_h is None else norm_h
        eps_be = min(eps_qet / d, 1 / (2 * norm))
    else:
        eps_r = eps_hs / (3 * (d + 1))
        eps_be = eps_hs / (3 * d * beta)
    delta_floor = delta_floor_for(r, t_prime, eps_be_available)
    if delta <= delta_floor:
        raise InfeasibleDelta(delta_floor, delta)
    params = QpeParams(
        r=r,
        t=t,
        t_prime=t_prime,
        k=k,
        d=d,
        degree=degree,
        delta=delta,
        eps_vN=eps_vN,
        delta_k=delta_k,
        beta=beta,
        eps_qet=eps_qet,
        eps_be=eps_be,
        eps_r=eps_r,
        eps_hs=eps_hs,
        delta_floor=delta_floor,
    )
    logger.info(
        "Selected r=%d, k=%d, t=%.6g, t'=%.6g, degree %d (%d pairs)",
        r,
        k,
        t,
        t_prime,
        degree,
        d,
    )
    return params


def pointer_initial_state(r: int) -> NDArray[np.complex128]:
    if not 1 <= r <= MAX_POINTER_QUBITS:
        raise BadRange(f'pointer size {r} outside [1, {MAX_POINTER_QUBITS}]')
    return np.full(2**r, 2 ** (-r / 2), dtype=np.complex128)


def _check_band(r: int, band: Optional[int]) -> int:
    band = r if band is None else band
    if not 1 <= band <= r:
        raise BadBand(f'band {band} outside [1, {r}]')
    return band


def _fourier_columns(
    columns: NDArray[np.complex128], r: int, band: int, sign: int
) -> NDArray[np.complex128]:
    # Hadamard then controlled phases on each qubit, most significant first,
    # and a final bit reversal
    had = hadamard()
    x = columns.reshape((2,) * r + (-1,)).astype(np.complex128, copy=True)
    for j in range(r):
        x = np.moveaxis(np.tensordot(had, x, axes=([1], [j])), 0, j)
        for k in range(2, min(r - j, band) + 1):
            index = [slice(None)] * (r + 1)
            index[j] = 1
            index[j + k - 1] = 1
            x[tuple(index)] *= np.exp(sign * 2j * np.pi / 2**k)
    x = x.transpose(list(range(r - 1, -1, -1)) + [r])
    return x.reshape(2**r, -1)


def qft_matrix(r: int, band: Optional[int] = None, sign: int = 1) -> ComplexMatrix:
    """Matrix of the (banded) transform with kernel exp(sign 2 pi i z x / 2^r)."""
    band = _check_band(r, band)
    return _fourier_columns(np.eye(2**r, dtype=np.complex128), r, band, sign)


def inverse_qft(
    state: ArrayLike, r: int, b: Optional[int] = None, sign: int = 1
) -> NDArray[np.complex128]:
    """Apply the pointer transform to the trailing r qubits of state."""
    band = _check_band(r, b)
    vector = np.asarray(state, dtype=np.complex128)
    size = 2**r
    if vector.shape[-1] % size:
        raise DimMismatch(f'state of size {vector.shape[-1]} has no {r} qubit tail')
    rows = vector.reshape(-1, size)
    transformed = _fourier_columns(rows.T, r, band, sign).T
    return transformed.reshape(vector.shape)


def analytic_kappa(x: int, lam: float, t: float, r: int) -> float:
    """Probability of pointer outcome x for an exact eigenstate of eigenvalue lam.

    >>> analytic_kappa(1, 0.5, 4 * math.pi, 2)
    1.0
    >>> round(analytic_kappa(0, 0.5, 4 * math.pi, 2), 12)
    0.0
    """
    size = 2**r
    if not 0 <= x < size:
        raise BadRange(f'outcome {x} outside [0, {size})')
    offset = 2 * math.pi * x - lam * t
    denominator = math.sin(offset / (2 * size))
    if abs(denominator) < KAPPA_TOLERANCE:
        return 1.0
    return math.sin(offset / 2) ** 2 / (size**2 * denominator**2)


def analytic_distribution(lam: float, t: float, r: int) -> NDArray[np.float64]:
    return np.array([analytic_kappa(x, lam, t, r) for x in range(2**r)])


def estimate_from_x(x: int, t: float) -> float:
    if t <= 0:
        raise ParameterError(f'evolution time must be positive, got {t}')
    return 2 * math.pi * x / t


def unwrap_estimate(x: int, t: float, r: int) -> float:
    """Estimate for a spectrum symmetric around zero.

    >>> round(unwrap_estimate(3, 4 * math.pi, 2), 12)
    -0.5
    """
    if x >= 2 ** (r - 1):
        x -= 2**r
    return estimate_from_x(x, t)


def _circular_distance(a: NDArray[np.float64], b: float, period: float) -> NDArray[np.float64]:
    return np.abs((a - b + period / 2) % period - period / 2)


def hit_mask(r: int, t: float, lam: float, eps_vN: float) -> NDArray[np.bool_]:
    """Outcomes whose estimate lies within eps_vN of lam, modulo the pointer range."""
    estimates = 2 * math.pi * np.arange(2**r) / t
    period = 2 * math.pi * 2**r / t
    return _circular_distance(estimates, lam, period) <= eps_vN + 1e-12


def analytic_hit_probability(lam: float, t: float, r: int, eps_vN: float) -> float:
    return float(np.sum(analytic_distribution(lam, t, r)[hit_mask(r, t, lam, eps_vN)]))


def success_probability_bound(params: QpeParams, eps_hs: float, leakage: float) -> float:
    if not 0 <= leakage <= 1:
        raise ParameterError(f'leakage must lie in [0, 1], got {leakage}')
    if params.k < 2:
        raise ParameterError(f'k must be at least 2, got {params.k}')
    window = 1 - 1 / (2 * (params.k - 1))
    return (1 - leakage) / (1 + 4**params.r * eps_hs) * window


def spectral_gap(h_matrix: ArrayLike, index: int) -> float:
    """Distance from eigenvalue `index` (ascending order) to the nearest distinct one."""
    eigenvalues = hermitian_eigendecomposition(h_matrix).eigenvalues
    target = eigenvalues[index]
    distances = np.abs(eigenvalues - target)
    others = distances[distances > DEGENERACY_TOLERANCE]
    if len(others) == 0:
        raise ParameterError('the spectrum has a single distinct eigenvalue')
    return float(np.min(others))


def dominant_eigen_index(h_matrix: ArrayLike, psi: ArrayLike) -> int:
    spectrum = hermitian_eigendecomposition(h_matrix)
    overlaps = np.abs(spectrum.eigenvectors.conj().T @ np.asarray(psi, dtype=np.complex128))
    return int(np.argmax(overlaps))


def eigen_leakage(h_matrix: ArrayLike, psi: ArrayLike, index: int) -> float:
    """Weight of psi outside the eigenspace of eigenvalue `index`."""
    spectrum = hermitian_eigendecomposition(h_matrix)
    overlaps = np.abs(spectrum.eigenvectors.conj().T @ np.asarray(psi, dtype=np.complex128))
    target = spectrum.eigenvalues[index]
    inside = np.abs(spectrum.eigenvalues - target) <= DEGENERACY_TOLERANCE
    return float(max(0.0, 1 - np.sum(overlaps[inside] ** 2)))


@dataclass(frozen=True, eq=False)
class EstimateReport:
    distribution: NDArray[np.float64]
    x_hat: int
    lambda_hat: float
    success_prob_analytic: float
    postselect_prob: float
    shots: int
    seed: Optional[int]
    samples: NDArray[np.int64] = field(repr=False)
    shot_estimates: NDArray[np.float64] = field(repr=False)
    target_eigenvalue: float
    hit_fraction: float
    hit_probability: float
    mode: str = 'qet'

    @property
    def shots_observed(self) -> NDArray[np.int64]:
        return np.bincount(self.samples, minlength=len(self.distribution))


def _hamiltonian_matrix(
    h: Union[LCPHamiltonian, BlockEncoding], hamiltonian_matrix: Optional[ArrayLike]
) -> ComplexMatrix:
    if hamiltonian_matrix is not None:
        return as_matrix(hamiltonian_matrix)
    if isinstance(h, LCPHamiltonian):
        return lcp_to_matrix(h)
    if h.parts is not None and h.parts[0].target is not None:
        return h.parts[0].target
    raise ValueError('the spectrum of H is needed alongside a coupled block-encoding')


def postselect(
    images: NDArray[np.complex128], flag: NDArray[np.complex128], system_dim: int
) -> tuple[NDArray[np.complex128], float]:
    """Project the flag registers onto |flag> and renormalize."""
    shaped = images.reshape(len(flag), system_dim)
    projected = flag.conj() @ shaped
    probability = float(np.vdot(projected, projected).real)
    if probability < POSTSELECT_FLOOR:
        raise PostselectFailed(f'post-selection probability {probability:.3e}')
    return projected / math.sqrt(probability), probability


def _exact_evolution(
    h: Union[LCPHamiltonian, BlockEncoding],
    h_matrix: ComplexMatrix,
    state: NDArray[np.complex128],
    params: QpeParams,
    time: float,
) -> NDArray[np.complex128]:
    if isinstance(h, BlockEncoding) and h.target is not None:
        target = h.target
    else:
        target = np.kron(h_matrix, np.diag(momentum_operator(params.r)))
    return matrix_exponential(target, -time) @ state


def _qet_evolution(
    h: Union[LCPHamiltonian, BlockEncoding],
    state: NDArray[np.complex128],
    params: QpeParams,
    time: float,
    max_degree_bumps: int = MAX_DEGREE_BUMPS,
) -> tuple[NDArray[np.complex128], float]:
    be = lcu_block_encoding(couple_pointer(h, params.r)) if isinstance(h, LCPHamiltonian) else h
    if be.system_dim != len(state):
        raise DimMismatch(
            f'encoding acts on dimension {be.system_dim}, the state has {len(state)}'
        )
    if params.eps_qet <= 0:
        raise ParameterError('the QET path needs a positive eps_qet budget')
    plan = build_simulation_circuit(
        be,
        time,
        params.eps_qet,
        min_degree=params.degree,
        max_degree_bumps=max_degree_bumps,
    )
    w = plan.circuit.signal
    plus = hadamard() @ basis_state(0, 2)
    flag = np.kron(plus, w.g_state)
    images = apply_circuit(plan.circuit, np.kron(flag, state))
    return postselect(images, flag, w.system_dim)


def run_vnqpe(
    h: Union[LCPHamiltonian, BlockEncoding],
    initial: ArrayLike,
    params: QpeParams,
    shots: int,
    seed: Optional[int] = None,
    mode: Mode = 'qet',
    sign: int = 1,
    band: Optional[int] = None,
    hamiltonian_matrix: Optional[ArrayLike] = None,
    max_degree_bumps: int = MAX_DEGREE_BUMPS,
) -> EstimateReport:
    if sign not in (1, -1):
        raise ParameterError(f'kernel sign must be +1 or -1, got {sign}')
    if shots < 0:
        raise ParameterError(f'shot count must be nonnegative, got {shots}')
    psi = np.asarray(initial, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-9:
        raise ParameterError(f'initial state has norm {norm:.12g}')
    h_matrix = _hamiltonian_matrix(h, hamiltonian_matrix)
    check_hermitian(h_matrix, atol=1e-9)
    if h_matrix.shape[0] != len(psi):
        raise DimMismatch(f'H has dimension {h_matrix.shape[0]}, the state {len(psi)}')

    state = np.kron(psi, pointer_initial_state(params.r))
    time = sign * params.t
    if mode == 'exact':
        evolved, postselect_prob = _exact_evolution(h, h_matrix, state, params, time), 1.0
    elif mode == 'qet':
        evolved, postselect_prob = _qet_evolution(h, state, params, time, max_degree_bumps)
    else:
        raise ParameterError(f'unknown mode {mode!r}')

    transformed = inverse_qft(evolved, params.r, band, sign).reshape(-1, params.pointer_dim)
    distribution = np.sum(np.abs(transformed) ** 2, axis=0)
    distribution /= np.sum(distribution)
    rng = np.random.default_rng(seed)
    samples = rng.choice(params.pointer_dim, size=shots, p=distribution)
    x_hat = int(np.argmax(distribution))
    shot_estimates = 2 * math.pi * samples / params.t

    index = dominant_eigen_index(h_matrix, psi)
    target = float(hermitian_eigendecomposition(h_matrix).eigenvalues[index])
    leakage = eigen_leakage(h_matrix, psi, index)
    eps_hs = params.eps_hs if mode == 'qet' else 0.0
    mask = hit_mask(params.r, params.t, target, params.eps_vN)
    hit_fraction = float(np.mean(mask[samples])) if shots else 0.0
    report = EstimateReport(
        distribution=distribution,
        x_hat=x_hat,
        lambda_hat=estimate_from_x(x_hat, params.t),
        success_prob_analytic=success_probability_bound(params, eps_hs, leakage),
        postselect_prob=postselect_prob,
        shots=shots,
        seed=seed,
        samples=samples,
        shot_estimates=shot_estimates,
        target_eigenvalue=target,
        hit_fraction=hit_fraction,
        hit_probability=float(np.sum(distribution[mask])),
        mode=mode,
    )
    logger.info(
        'Estimated lambda=%.6g (x=%d) in %s mode, branch probability %.6f',
        report.lambda_hat,
        x_hat,
        mode,
        postselect_prob,
    )
    return report
