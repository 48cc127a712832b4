# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Block-encodings and their qubitization.

A (beta, n_anc, eps) block-encoding of a Hermitian H is a unitary U acting on
n_anc ancilla qubits followed by the system register such that

    || beta * <G| U |G> - H || <= eps

where <G| . |G> projects the ancilla register onto the state |G> (by default
|0...0>) and keeps the system part. The ancilla register always holds the
high order qubits of a basis index.

Encodings built from a Pauli sum keep their PREP/SELECT factors and apply
themselves to state vectors without ever forming the dense unitary, which
is only materialized on demand. The same goes for tensor products and for
the qubitized operators built on top of an encoding.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .numerics import (
    ComplexMatrix,
    NumericalError,
    NotUnitary,
    TooLarge,
    as_matrix,
    basis_state,
    check_hermitian,
    hadamard,
    hermitian_eigendecomposition,
    is_unitary,
    matrix_exponential,
    operator_norm,
    random_hermitian,
)
from .pauli import (
    MAX_QUBITS,
    LCPHamiltonian,
    PauliString,
    lcp_to_matrix,
    momentum_operator,
)

logger = logging.getLogger(__name__)

ComplexVectors = NDArray[np.complex128]

BRANCH_CUT_MARGIN = 1e-9
CONTROLLED_FORM_TOLERANCE = 1e-10
# Z.X on the control qubit
ZX = np.array([[0, 1], [-1, 0]], dtype=np.complex128)


class EmptyHamiltonian(ValueError):
    """Raise when a Pauli sum has no term left to encode."""

    pass


class NotControlledForm(NumericalError):
    """Raise when a matrix is not |0><0| (x) I + |1><1| (x) U."""

    pass


class BranchCut(NumericalError):
    """Raise when an eigenphase sits on the branch cut of the logarithm."""

    pass


class BadNorm(ValueError):
    """Raise when a declared norm bound does not hold."""

    pass


class DimMismatch(NumericalError):
    """Raise when operands of a block-encoding check have inconsistent shapes."""

    pass


@dataclass(frozen=True)
class LcuFactors:
    prep: ComplexMatrix
    strings: tuple[PauliString, ...]
    signs: NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    beta: float
    n_anc: int
    system_dim: int
    eps: float = 0.0
    g_state: Optional[ComplexVectors] = None
    matrix: Optional[ComplexMatrix] = field(default=None, repr=False)
    declared_target: Optional[ComplexMatrix] = field(default=None, repr=False)
    hamiltonian: Optional[LCPHamiltonian] = None
    lcu: Optional[LcuFactors] = field(default=None, repr=False)
    parts: Optional[tuple[BlockEncoding, BlockEncoding]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError(f'subnormalization must be positive, got {self.beta}')
        if self.eps < 0:
            raise ValueError(f'encoding error must be nonnegative, got {self.eps}')
        anc_dim = 2**self.n_anc
        if self.g_state is None:
            object.__setattr__(self, 'g_state', basis_state(0, anc_dim))
        g = np.asarray(self.g_state, dtype=np.complex128)
        if g.shape != (anc_dim,):
            raise DimMismatch(f'|G> has shape {g.shape}, expected ({anc_dim},)')
        if abs(np.linalg.norm(g) - 1) > 1e-12:
            raise ValueError('|G> must be normalized')
        object.__setattr__(self, 'g_state', g)
        if self.matrix is None and self.lcu is None and self.parts is None:
            raise ValueError('a block-encoding needs a unitary or its factors')
        if self.matrix is not None:
            if self.matrix.shape != (self.dim, self.dim):
                raise DimMismatch(
                    f'unitary has shape {self.matrix.shape}, expected dimension {self.dim}'
                )
            if not is_unitary(self.matrix):
                raise NotUnitary('block-encoding matrix is not unitary')

    @property
    def anc_dim(self) -> int:
        return 2**self.n_anc

    @property
    def dim(self) -> int:
        return self.anc_dim * self.system_dim

    @property
    def qubits(self) -> int:
        return self.n_anc + int(math.log2(self.system_dim))

    @cached_property
    def unitary(self) -> ComplexMatrix:
        if self.matrix is not None:
            return self.matrix
        return self.apply(np.eye(self.dim, dtype=np.complex128))

    @cached_property
    def target(self) -> Optional[ComplexMatrix]:
        if self.declared_target is not None:
            return self.declared_target
        if self.hamiltonian is not None:
            return lcp_to_matrix(self.hamiltonian)
        if self.parts is not None:
            a, b = self.parts
            if a.target is not None and b.target is not None:
                return np.kron(a.target, b.target)
        return None

    def apply(self, vectors: ArrayLike) -> ComplexVectors:
        return self._apply(vectors, adjoint=False)

    def apply_adjoint(self, vectors: ArrayLike) -> ComplexVectors:
        return self._apply(vectors, adjoint=True)

    def _apply(self, vectors: ArrayLike, adjoint: bool) -> ComplexVectors:
        x = np.asarray(vectors, dtype=np.complex128)
        if x.shape[0] != self.dim:
            raise DimMismatch(f'vectors of leading size {x.shape[0]}, expected {self.dim}')
        flat = x.reshape(self.dim, -1)
        if self.matrix is not None:
            m = self.matrix.conj().T if adjoint else self.matrix
            result = m @ flat
        elif self.lcu is not None:
            result = _apply_lcu(self.lcu, self.system_dim, flat)
        else:
            assert self.parts is not None
            result = _apply_tensor(self.parts, flat, adjoint)
        return result.reshape(x.shape)

    def block(self) -> ComplexMatrix:
        """Return <G| U |G> on the system register."""
        g = self.g_state
        assert g is not None
        columns = np.kron(g.reshape(-1, 1), np.eye(self.system_dim))
        images = self.apply(columns).reshape(self.anc_dim, self.system_dim, -1)
        return np.einsum('a,aij->ij', g.conj(), images)


def _apply_lcu(
    factors: LcuFactors, system_dim: int, flat: ComplexVectors
) -> ComplexVectors:
    # U = PREP^dag SELECT PREP is Hermitian since every SELECT term is
    prep = factors.prep
    anc_dim = prep.shape[0]
    x = flat.reshape(anc_dim, system_dim, -1)
    y = np.einsum('ab,bsk->ask', prep, x)
    for index, (string, sign) in enumerate(zip(factors.strings, factors.signs)):
        y[index] = sign * string.apply(y[index])
    z = np.einsum('ab,bsk->ask', prep.conj().T, y)
    return z.reshape(anc_dim * system_dim, -1)


def _apply_tensor(
    parts: tuple[BlockEncoding, BlockEncoding], flat: ComplexVectors, adjoint: bool
) -> ComplexVectors:
    a, b = parts
    k = flat.shape[1]
    # (ancA, ancB, sysA, sysB) -> (ancA, sysA, ancB, sysB)
    x = flat.reshape(a.anc_dim, b.anc_dim, a.system_dim, b.system_dim, k)
    x = x.transpose(0, 2, 1, 3, 4).reshape(a.dim, b.dim * k)
    x = a._apply(x, adjoint).reshape(a.dim, b.dim, k)
    x = x.transpose(1, 0, 2).reshape(b.dim, a.dim * k)
    x = b._apply(x, adjoint).reshape(b.dim, a.dim, k).transpose(1, 0, 2)
    x = x.reshape(a.anc_dim, a.system_dim, b.anc_dim, b.system_dim, k)
    return x.transpose(0, 2, 1, 3, 4).reshape(a.dim * b.dim, k)


def _householder_completion(column: NDArray[np.float64]) -> ComplexMatrix:
    # real orthogonal reflection whose first column is the given unit vector
    dim = len(column)
    e0 = basis_state(0, dim).real
    v = column - e0
    norm = np.linalg.norm(v)
    if norm < 1e-15:
        return np.eye(dim, dtype=np.complex128)
    v = v / norm
    return (np.eye(dim) - 2 * np.outer(v, v)).astype(np.complex128)


def lcu_block_encoding(h: LCPHamiltonian) -> BlockEncoding:
    if h.num_terms == 0:
        raise EmptyHamiltonian('cannot block-encode a Hamiltonian without terms')
    n_anc = math.ceil(math.log2(h.num_terms)) if h.num_terms > 1 else 0
    if h.n + n_anc > MAX_QUBITS:
        raise TooLarge(f'{h.n} system and {n_anc} ancilla qubits exceed {MAX_QUBITS}')
    alpha = h.alpha
    coefficients = h.coefficients
    amplitudes = np.zeros(2**n_anc)
    amplitudes[: h.num_terms] = np.sqrt(np.abs(coefficients) / alpha)
    factors = LcuFactors(
        prep=_householder_completion(amplitudes),
        strings=tuple(string for _, string in h.terms),
        signs=np.sign(coefficients),
    )
    logger.debug(
        'LCU encoding of %d terms: beta=%.6g, %d ancillas', h.num_terms, alpha, n_anc
    )
    return BlockEncoding(
        beta=alpha,
        n_anc=n_anc,
        system_dim=2**h.n,
        hamiltonian=h,
        lcu=factors,
    )


def block_encoding_from_unitary(cu: ArrayLike) -> BlockEncoding:
    """Encode sin(H) from a controlled U = exp(iH).

    The control qubit goes through a Hadamard basis change around
    -i CU^dag (ZX (x) I) CU, which leaves (U - U^dag) / 2i in the |0> block.
    """
    controlled = as_matrix(cu)
    dim = controlled.shape[0]
    if controlled.shape != (dim, dim) or dim % 2:
        raise NotControlledForm(f'controlled unitary has shape {controlled.shape}')
    half = dim // 2
    u = controlled[half:, half:]
    structure = max(
        operator_norm(controlled[:half, :half] - np.eye(half)),
        operator_norm(controlled[:half, half:]),
        operator_norm(controlled[half:, :half]),
    )
    if structure > CONTROLLED_FORM_TOLERANCE or not is_unitary(u):
        raise NotControlledForm(f'matrix deviates from controlled form by {structure:.3e}')
    had = np.kron(hadamard(), np.eye(half))
    conjugated = -1j * controlled.conj().T @ np.kron(ZX, np.eye(half)) @ controlled
    return BlockEncoding(
        beta=1.0,
        n_anc=1,
        system_dim=half,
        matrix=had @ conjugated @ had,
        declared_target=(u - u.conj().T) / 2j,
    )


def unitary_dilation(a: ArrayLike) -> ComplexMatrix:
    """Return [[A, S], [S, -A]] with S = sqrt(I - A^2) for Hermitian ||A|| <= 1."""
    spectrum = hermitian_eigendecomposition(a)
    values = spectrum.eigenvalues
    if np.max(np.abs(values), initial=0.0) > 1 + 1e-12:
        raise BadNorm('dilation needs an operator of norm at most one')
    v = spectrum.eigenvectors
    a_part = (v * values) @ v.conj().T
    s_part = (v * np.sqrt(np.clip(1 - values**2, 0, None))) @ v.conj().T
    return np.block([[a_part, s_part], [s_part, -a_part]])


def idealized_log_encoding(u: ArrayLike, norm_h: float) -> BlockEncoding:
    """Encode H = -i log U through an exact eigendecomposition of U.

    The block holds H * pi / (4 * norm_h), the encoding has beta = 4 * norm_h / pi
    and two ancilla qubits, the first of which is idle.
    """
    unitary = as_matrix(u)
    if not is_unitary(unitary):
        raise NotUnitary('expected a unitary')
    if norm_h <= 0:
        raise BadNorm(f'norm bound must be positive, got {norm_h}')
    schur_form, basis = linalg.schur(unitary, output='complex')
    phases = np.angle(np.diag(schur_form))
    if np.any(np.abs(phases) >= np.pi - BRANCH_CUT_MARGIN):
        raise BranchCut('U has an eigenphase on the branch cut at +-pi')
    h = (basis * phases) @ basis.conj().T
    h = (h + h.conj().T) / 2
    if operator_norm(h) > norm_h + 1e-9:
        raise BadNorm(f'||H|| = {operator_norm(h):.6g} exceeds the bound {norm_h}')
    beta = 4 * norm_h / math.pi
    dilation = unitary_dilation(h / beta)
    return BlockEncoding(
        beta=beta,
        n_anc=2,
        system_dim=unitary.shape[0],
        matrix=np.kron(np.eye(2), dilation),
        declared_target=h,
    )


def oracle_pipeline_encoding(u: ArrayLike, norm_h: float, r: int) -> BlockEncoding:
    """Encode H (x) p from U = exp(iH) with perfect oracles.

    The pointer factor p = diag(z / 2^r) is encoded from exp(ip) the same way.
    """
    momentum = momentum_operator(r)
    pointer = idealized_log_encoding(np.diag(np.exp(1j * momentum)), 1.0)
    return tensor_block_encodings(idealized_log_encoding(u, norm_h), pointer)


def tensor_block_encodings(a: BlockEncoding, b: BlockEncoding) -> BlockEncoding:
    beta = a.beta * b.beta
    encoding = BlockEncoding(
        beta=beta,
        n_anc=a.n_anc + b.n_anc,
        system_dim=a.system_dim * b.system_dim,
        eps=b.beta * a.eps + a.beta * b.eps,
        g_state=np.kron(a.g_state, b.g_state),
        parts=(a, b),
    )
    target = encoding.target
    if target is not None and operator_norm(target) > beta + 1e-9:
        logger.warning(
            'Tensor target has norm %.6g above the subnormalization %.6g',
            operator_norm(target),
            beta,
        )
    return encoding


def verify_block_encoding(be: BlockEncoding, target: ArrayLike) -> float:
    expected = np.asarray(target, dtype=np.complex128)
    if expected.shape != (be.system_dim, be.system_dim):
        raise DimMismatch(
            f'target of shape {expected.shape} for a system of dimension {be.system_dim}'
        )
    return operator_norm(be.beta * be.block() - expected)


def perturb_block_encoding(
    be: BlockEncoding,
    strength: float,
    rng: np.random.Generator,
    target: Optional[ArrayLike] = None,
) -> BlockEncoding:
    """Return U exp(i strength G) for a random unit norm Hermitian G.

    The measured encoding error becomes the eps of the result.
    """
    reference = be.target if target is None else np.asarray(target, dtype=np.complex128)
    if reference is None:
        raise ValueError('perturbing an encoding needs its target')
    generator = random_hermitian(be.dim, rng)
    perturbed = BlockEncoding(
        beta=be.beta,
        n_anc=be.n_anc,
        system_dim=be.system_dim,
        g_state=be.g_state,
        matrix=be.unitary @ matrix_exponential(generator, strength),
        declared_target=reference,
    )
    measured = verify_block_encoding(perturbed, reference)
    return BlockEncoding(
        beta=be.beta,
        n_anc=be.n_anc,
        system_dim=be.system_dim,
        eps=measured,
        g_state=be.g_state,
        matrix=perturbed.matrix,
        declared_target=reference,
    )


@dataclass(frozen=True, eq=False)
class QubitizedEncoding:
    """W = (X (x) I) C1[U^dag] C0[U] over one extra leading qubit.

    W is Hermitian with W^2 = I and <G'|W|G'> = <G|U|G> for |G'> = |+>|G>, so
    it is a (beta, n_anc + 1, eps) encoding of the same operator. The iterate
    (2|G'><G'| - I) W carries the eigenphases +-arccos(lambda / beta).
    """

    source: BlockEncoding
    qubit_flag: bool = True

    @property
    def beta(self) -> float:
        return self.source.beta

    @property
    def n_anc(self) -> int:
        return self.source.n_anc + 1

    @property
    def eps(self) -> float:
        return self.source.eps

    @property
    def system_dim(self) -> int:
        return self.source.system_dim

    @property
    def anc_dim(self) -> int:
        return 2 * self.source.anc_dim

    @property
    def dim(self) -> int:
        return 2 * self.source.dim

    @property
    def qubits(self) -> int:
        return self.source.qubits + 1

    @cached_property
    def g_state(self) -> ComplexVectors:
        plus = np.ones(2, dtype=np.complex128) / math.sqrt(2)
        return np.kron(plus, self.source.g_state)

    @cached_property
    def unitary(self) -> ComplexMatrix:
        return self.apply_w(np.eye(self.dim, dtype=np.complex128))

    @cached_property
    def iterate(self) -> ComplexMatrix:
        return self.apply_iterate(np.eye(self.dim, dtype=np.complex128))

    def apply_w(self, vectors: ArrayLike) -> ComplexVectors:
        x = np.asarray(vectors, dtype=np.complex128)
        half = self.source.dim
        flat = x.reshape(2, half, -1)
        result = np.empty_like(flat)
        result[0] = self.source.apply_adjoint(flat[1])
        result[1] = self.source.apply(flat[0])
        return result.reshape(x.shape)

    def reflect(self, vectors: ArrayLike) -> ComplexVectors:
        """Apply 2|G'><G'| (x) I - I."""
        x = np.asarray(vectors, dtype=np.complex128)
        flat = x.reshape(self.anc_dim, self.system_dim, -1)
        g = self.g_state
        overlap = np.einsum('a,ask->sk', g.conj(), flat)
        result = 2 * np.einsum('a,sk->ask', g, overlap) - flat
        return result.reshape(x.shape)

    def apply_iterate(self, vectors: ArrayLike) -> ComplexVectors:
        return self.reflect(self.apply_w(vectors))

    def apply_iterate_adjoint(self, vectors: ArrayLike) -> ComplexVectors:
        return self.apply_w(self.reflect(vectors))

    def block(self) -> ComplexMatrix:
        g = self.g_state
        columns = np.kron(g.reshape(-1, 1), np.eye(self.system_dim))
        images = self.apply_w(columns).reshape(self.anc_dim, self.system_dim, -1)
        return np.einsum('a,aij->ij', g.conj(), images)

    def square_residual(self) -> float:
        """Return || <G'| W^2 |G'> - I ||."""
        g = self.g_state
        columns = np.kron(g.reshape(-1, 1), np.eye(self.system_dim))
        images = self.apply_w(self.apply_w(columns))
        projected = np.einsum(
            'a,aij->ij', g.conj(), images.reshape(self.anc_dim, self.system_dim, -1)
        )
        return operator_norm(projected - np.eye(self.system_dim))


def qubitize(be: BlockEncoding) -> QubitizedEncoding:
    w = QubitizedEncoding(source=be)
    logger.debug('Qubitized encoding: beta=%.6g, %d ancillas', w.beta, w.n_anc)
    return w


@dataclass(frozen=True)
class EigenphaseReport:
    eigenvalues: NDArray[np.float64]
    expected: tuple[tuple[float, ...], ...]
    observed: tuple[tuple[float, ...], ...]
    mismatch: float


def _phase_distance(a: float, b: float) -> float:
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def _match_phases(expected: Sequence[float], observed: Sequence[float]) -> float:
    if len(observed) == 1:
        return max(_phase_distance(e, observed[0]) for e in expected)
    first, second = expected
    direct = max(_phase_distance(first, observed[0]), _phase_distance(second, observed[1]))
    swapped = max(_phase_distance(first, observed[1]), _phase_distance(second, observed[0]))
    return min(direct, swapped)


def qubitization_eigenphases(w: QubitizedEncoding, h: ArrayLike) -> EigenphaseReport:
    """Check that the iterate has eigenphases +-arccos(lambda / beta).

    Each eigenvector |lambda> of h seeds the subspace spanned by |G'>|lambda>
    and its image under the iterate; the iterate restricted to it is
    diagonalized and compared against the expected pair.
    """
    matrix = as_matrix(h)
    check_hermitian(matrix, atol=1e-9)
    spectrum = hermitian_eigendecomposition(matrix)
    expected_all = []
    observed_all = []
    mismatch = 0.0
    for value, vector in zip(spectrum.eigenvalues, spectrum.eigenvectors.T):
        seed = np.kron(w.g_state, vector)
        image = w.apply_iterate(seed)
        orthogonal = image - np.vdot(seed, image) * seed
        basis = [seed]
        if np.linalg.norm(orthogonal) > 1e-10:
            basis.append(orthogonal / np.linalg.norm(orthogonal))
        frame = np.stack(basis, axis=1)
        images = w.apply_iterate(frame)
        restricted = frame.conj().T @ images
        leakage = operator_norm(images - frame @ restricted)
        observed = tuple(float(p) for p in np.sort(np.angle(np.linalg.eigvals(restricted))))
        angle = math.acos(float(np.clip(value / w.beta, -1.0, 1.0)))
        expected = (-angle, angle)
        mismatch = max(mismatch, _match_phases(expected, observed), leakage)
        expected_all.append(expected)
        observed_all.append(observed)
    return EigenphaseReport(
        eigenvalues=spectrum.eigenvalues,
        expected=tuple(expected_all),
        observed=tuple(observed_all),
        mismatch=mismatch,
    )
