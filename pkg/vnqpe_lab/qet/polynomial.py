# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..numerics import bessel_j_sequence

logger = logging.getLogger(__name__)

SUP_NORM_GRID = 512
RESIDUAL_GRID = 256


def unit_circle_grid(size: int) -> NDArray[np.float64]:
    return 2 * np.pi * np.arange(size) / size


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """Complex coefficients of z^-d ... z^d, lowest degree first."""

    coeffs: NDArray[np.complex128]

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.ndim != 1 or len(coeffs) % 2 == 0:
            raise ValueError('a Laurent polynomial needs 2d + 1 coefficients')
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, complex]) -> LaurentPolynomial:
        degree = max((abs(k) for k in coeffs), default=0)
        array = np.zeros(2 * degree + 1, dtype=np.complex128)
        for k, value in coeffs.items():
            array[k + degree] = value
        return cls(array)

    @classmethod
    def from_analytic(cls, coeffs: ArrayLike) -> LaurentPolynomial:
        """Return z^-d P(z) for a polynomial P of even degree 2d."""
        return cls(np.asarray(coeffs, dtype=np.complex128))

    @property
    def degree(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def degrees(self) -> NDArray[np.int64]:
        return np.arange(-self.degree, self.degree + 1)

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.degree:
            return 0j
        return complex(self.coeffs[k + self.degree])

    def analytic_coefficients(self) -> NDArray[np.complex128]:
        """Coefficients of z^d p(z), a polynomial of degree 2d."""
        return self.coeffs.copy()

    def __call__(self, z: ArrayLike) -> NDArray[np.complex128]:
        z = np.asarray(z, dtype=np.complex128)
        powers = np.power.outer(z, self.degrees.astype(float))
        return powers @ self.coeffs

    def on_circle(self, theta: ArrayLike) -> NDArray[np.complex128]:
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.degrees)) @ self.coeffs

    def sup_norm(self, gridsize: int = SUP_NORM_GRID) -> float:
        return float(np.max(np.abs(self.on_circle(unit_circle_grid(gridsize)))))

    def reciprocity_defect(self) -> float:
        """Return max |c_k - c_-k|; zero for p(z) = p(1/z)."""
        return float(np.max(np.abs(self.coeffs - self.coeffs[::-1]), initial=0.0))

    def scaled(self, factor: complex) -> LaurentPolynomial:
        return LaurentPolynomial(self.coeffs * factor)

    def padded(self, degree: int) -> LaurentPolynomial:
        if degree < self.degree:
            raise ValueError(f'cannot pad degree {self.degree} down to {degree}')
        extra = degree - self.degree
        return LaurentPolynomial(np.pad(self.coeffs, (extra, extra)))


def degree_bound(t: float, eps: float) -> int:
    """Truncation order R for the Jacobi-Anger series of exp(-i t cos theta).

    Natural logarithms throughout.

    >>> degree_bound(5, 1e-3)
    14
    >>> degree_bound(0.1, 1e-3)
    7
    """
    if not 0 < eps < 1:
        raise ValueError(f'eps must lie in (0, 1), got {eps}')
    if t <= 0:
        return 0
    log_inverse = math.log(1 / eps)
    if t > log_inverse / math.e:
        return math.ceil(math.e * t)
    return math.ceil(4 * log_inverse / math.log(math.e + log_inverse / t))


def jacobi_anger_coefficients(t: float, r: int) -> LaurentPolynomial:
    """Truncated expansion of exp(-i t cos theta) of total degree 2R + 1.

    The coefficient of z^k is (-i)^|k| J_|k|(t): even degrees are real, odd
    degrees imaginary, and the polynomial is reciprocal.
    """
    if r < 0:
        raise ValueError(f'truncation order must be nonnegative, got {r}')
    degree = 2 * r + 1
    orders = np.arange(degree + 1)
    powers_of_minus_i = np.array([1, -1j, -1, 1j])[orders % 4]
    half = bessel_j_sequence(degree, t) * powers_of_minus_i
    coeffs = np.concatenate([half[:0:-1], half])
    return LaurentPolynomial(coeffs)


def truncation_error(p: LaurentPolynomial, t: float, gridsize: int) -> float:
    if gridsize < 4 * p.degree:
        raise ValueError(f'grid of {gridsize} points is too coarse for degree {p.degree}')
    theta = unit_circle_grid(gridsize)
    return float(np.max(np.abs(p.on_circle(theta) - np.exp(-1j * t * np.cos(theta)))))
