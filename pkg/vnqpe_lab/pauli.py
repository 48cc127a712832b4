# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Pauli strings and Hamiltonians given as real linear combinations of them.

Hamiltonian file format (UTF-8 text):

    # comment
    <real coefficient> <Pauli letters>

One term per line, letters taken from I, X, Y and Z. Every line must carry
the same number of letters. Duplicate strings are merged by adding their
coefficients and terms are kept in lexicographic order of their letters.

The letter at position q acts on qubit q, qubit 0 being the most significant
bit of a basis index.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import TextIO, Union

import numpy as np
from numpy.typing import NDArray

from .numerics import ComplexMatrix, RealVector, TooLarge

logger = logging.getLogger(__name__)

PAULI_LETTERS = 'IXYZ'
MAX_QUBITS = 12
MAX_POINTER_QUBITS = 10


class ParseError(ValueError):
    """Raise when a Hamiltonian text cannot be parsed."""

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f'line {line}: {reason}')
        self.line = line
        self.reason = reason


class BadRange(ValueError):
    """Raise when a register size is outside its supported range."""

    pass


@dataclass(frozen=True, order=True)
class PauliString:
    letters: str

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError('a Pauli string needs at least one letter')
        invalid = set(self.letters) - set(PAULI_LETTERS)
        if invalid:
            raise ValueError(f'invalid Pauli letters: {"".join(sorted(invalid))}')

    def __str__(self) -> str:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    def masks(self) -> tuple[int, int, int]:
        """Return the (flip, phase, y-count) triple of the symplectic form.

        P|b> = i^ny (-1)^popcount(b & phase) |b ^ flip>
        """
        n = len(self.letters)
        flip = phase = 0
        num_y = 0
        for q, letter in enumerate(self.letters):
            bit = 1 << (n - 1 - q)
            if letter in 'XY':
                flip |= bit
            if letter in 'YZ':
                phase |= bit
            if letter == 'Y':
                num_y += 1
        return flip, phase, num_y

    def permutation(self) -> tuple[NDArray[np.int64], NDArray[np.complex128]]:
        """Return (targets, factors) with P|b> = factors[b] |targets[b]>."""
        flip, phase, num_y = self.masks()
        indices = np.arange(2 ** len(self.letters), dtype=np.int64)
        parity = np.zeros_like(indices)
        masked = indices & phase
        while np.any(masked):
            parity ^= masked & 1
            masked >>= 1
        factors = (1j**num_y) * (1 - 2 * parity).astype(np.complex128)
        return indices ^ flip, factors

    def to_matrix(self) -> ComplexMatrix:
        dim = 2 ** len(self.letters)
        targets, factors = self.permutation()
        matrix = np.zeros((dim, dim), dtype=np.complex128)
        matrix[targets, np.arange(dim)] = factors
        return matrix

    def apply(self, vectors: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """Apply the string to the leading axis of vectors."""
        targets, factors = self.permutation()
        result = np.empty_like(vectors)
        shape = (-1,) + (1,) * (vectors.ndim - 1)
        result[targets] = factors.reshape(shape) * vectors
        return result

    def tensor(self, other: PauliString) -> PauliString:
        return PauliString(self.letters + other.letters)


@dataclass(frozen=True)
class LCPHamiltonian:
    terms: tuple[tuple[float, PauliString], ...]
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError('a Hamiltonian acts on at least one qubit')
        for coefficient, string in self.terms:
            if len(string) != self.n:
                raise ValueError(
                    f'term {string} acts on {len(string)} qubits, expected {self.n}'
                )
            if not math.isfinite(coefficient):
                raise ValueError(f'term {string} has a non-finite coefficient')

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[tuple[float, Union[PauliString, str]]],
        n: int | None = None,
    ) -> LCPHamiltonian:
        merged: dict[str, float] = {}
        for coefficient, string in terms:
            letters = str(string)
            if n is None:
                n = len(letters)
            merged[letters] = merged.get(letters, 0.0) + float(coefficient)
        if n is None:
            raise ValueError('cannot infer the qubit count of an empty Hamiltonian')
        canonical = tuple(
            (coefficient, PauliString(letters))
            for letters, coefficient in sorted(merged.items())
            if coefficient != 0.0
        )
        return cls(terms=canonical, n=n)

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def alpha(self) -> float:
        return float(sum(abs(coefficient) for coefficient, _ in self.terms))

    @property
    def coefficients(self) -> RealVector:
        return np.array([coefficient for coefficient, _ in self.terms], dtype=float)

    def __str__(self) -> str:
        return serialize_lcp(self)


def _parse_line(number: int, line: str) -> tuple[float, str] | None:
    stripped = line.strip()
    if not stripped or stripped.startswith('#'):
        return None
    fields = stripped.split()
    if len(fields) != 2:
        raise ParseError(number, f'expected "<coefficient> <letters>", got {stripped!r}')
    raw_coefficient, letters = fields
    try:
        coefficient = float(raw_coefficient)
    except ValueError:
        if 'j' in raw_coefficient.lower():
            raise ParseError(number, f'complex coefficient {raw_coefficient!r}')
        raise ParseError(number, f'malformed coefficient {raw_coefficient!r}')
    if not math.isfinite(coefficient):
        raise ParseError(number, f'non-finite coefficient {raw_coefficient!r}')
    bad = sorted(set(letters) - set(PAULI_LETTERS))
    if bad:
        raise ParseError(number, f'invalid Pauli letter {bad[0]!r}')
    return coefficient, letters


def parse_lcp(text: Union[str, TextIO]) -> LCPHamiltonian:
    if not isinstance(text, str):
        text = text.read()
    terms: list[tuple[float, str]] = []
    n: int | None = None
    for number, line in enumerate(text.splitlines(), start=1):
        parsed = _parse_line(number, line)
        if parsed is None:
            continue
        coefficient, letters = parsed
        if n is None:
            n = len(letters)
        elif len(letters) != n:
            raise ParseError(
                number, f'{letters} has {len(letters)} letters, expected {n}'
            )
        terms.append((coefficient, letters))
    if n is None:
        raise ParseError(0, 'no Hamiltonian term found')
    h = LCPHamiltonian.from_terms(terms, n)
    logger.debug('Parsed %d lines into %d terms on %d qubits', len(terms), h.num_terms, n)
    return h


def serialize_lcp(h: LCPHamiltonian) -> str:
    return ''.join(f'{coefficient!r} {string}\n' for coefficient, string in h.terms)


def _as_pauli(string: Union[str, PauliString]) -> PauliString:
    return string if isinstance(string, PauliString) else PauliString(string)


def pauli_matrix(string: Union[str, PauliString]) -> ComplexMatrix:
    return _as_pauli(string).to_matrix()


def apply_pauli(
    string: Union[str, PauliString], vectors: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    return _as_pauli(string).apply(np.asarray(vectors, dtype=np.complex128))


def lcp_to_matrix(h: LCPHamiltonian) -> ComplexMatrix:
    if h.n > MAX_QUBITS:
        raise TooLarge(f'{h.n} qubits exceed the dense limit of {MAX_QUBITS}')
    dim = 2**h.n
    columns = np.arange(dim)
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for coefficient, string in h.terms:
        targets, factors = string.permutation()
        matrix[targets, columns] += coefficient * factors
    return matrix


def momentum_operator(r: int) -> RealVector:
    """Diagonal of the discretized pointer momentum, z / 2^r.

    >>> momentum_operator(2).tolist()
    [0.0, 0.25, 0.5, 0.75]
    """
    if not 1 <= r <= MAX_POINTER_QUBITS:
        raise BadRange(f'pointer size {r} outside [1, {MAX_POINTER_QUBITS}]')
    return np.arange(2**r, dtype=float) / 2**r


def couple_pointer(h: LCPHamiltonian, r: int) -> LCPHamiltonian:
    """Expand H (x) p into a Pauli sum over n + r qubits.

    p = sum_j 2^-j (I - Z_j) / 2 for pointer qubits j = 1..r, the first pointer
    qubit being the most significant one.
    """
    if r < 1:
        raise BadRange(f'pointer size {r} must be at least 1')
    if h.n + r > MAX_QUBITS:
        raise TooLarge(f'{h.n} + {r} qubits exceed the dense limit of {MAX_QUBITS}')
    identity_weight = (1 - 2.0**-r) / 2
    terms: list[tuple[float, PauliString]] = []
    for coefficient, string in h.terms:
        terms.append((coefficient * identity_weight, string.tensor(PauliString('I' * r))))
        for j in range(1, r + 1):
            pointer = PauliString('I' * (j - 1) + 'Z' + 'I' * (r - j))
            terms.append((-coefficient * 2.0**-j / 2, string.tensor(pointer)))
    coupled = LCPHamiltonian.from_terms(terms, h.n + r)
    logger.debug(
        'Coupled %d terms to a %d qubit pointer: %d terms', h.num_terms, r, coupled.num_terms
    )
    return coupled
