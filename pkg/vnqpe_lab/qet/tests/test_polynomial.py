# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import math
import unittest

import numpy as np
import pytest
from hamcrest import (
    assert_that,
    calling,
    close_to,
    equal_to,
    less_than_or_equal_to,
    raises,
)

from ..polynomial import (
    LaurentPolynomial,
    degree_bound,
    jacobi_anger_coefficients,
    truncation_error,
    unit_circle_grid,
)


class TestDegreeBound(unittest.TestCase):
    def test_linear_branch(self) -> None:
        assert_that(degree_bound(5, 1e-3), equal_to(14))

    def test_logarithmic_branch(self) -> None:
        assert_that(degree_bound(0.1, 1e-3), equal_to(7))

    def test_large_time_always_linear(self) -> None:
        for t in (10.0, 100.0, 1000.0):
            assert_that(degree_bound(t, 0.5), equal_to(math.ceil(math.e * t)))

    def test_zero_time(self) -> None:
        assert_that(degree_bound(0, 1e-3), equal_to(0))

    def test_eps_out_of_range(self) -> None:
        assert_that(calling(degree_bound).with_args(1.0, 0.0), raises(ValueError))
        assert_that(calling(degree_bound).with_args(1.0, 1.0), raises(ValueError))


class TestLaurentPolynomial(unittest.TestCase):
    def test_even_length_is_rejected(self) -> None:
        assert_that(calling(LaurentPolynomial).with_args([1, 2]), raises(ValueError))

    def test_from_mapping(self) -> None:
        p = LaurentPolynomial.from_mapping({2: 0.5, -2: 0.5})

        assert_that(p.degree, equal_to(2))
        assert_that(p.coefficient(2), equal_to(0.5))
        assert_that(p.coefficient(0), equal_to(0))
        assert_that(p.coefficient(7), equal_to(0))

    def test_evaluation_matches_on_circle(self) -> None:
        p = LaurentPolynomial([0.1j, 0.3, -0.2, 0.4j, 0.05])
        theta = unit_circle_grid(16)

        assert np.allclose(p(np.exp(1j * theta)), p.on_circle(theta))

    def test_cosine_sup_norm(self) -> None:
        p = LaurentPolynomial.from_mapping({2: 0.5, -2: 0.5})

        assert_that(p.sup_norm(), close_to(1.0, 1e-12))
        assert_that(p.reciprocity_defect(), equal_to(0.0))

    def test_padding_keeps_values(self) -> None:
        p = LaurentPolynomial([0.2, 0.5, 0.1j])
        theta = unit_circle_grid(8)

        padded = p.padded(3)

        assert_that(padded.degree, equal_to(3))
        assert np.allclose(padded.on_circle(theta), p.on_circle(theta))
        assert_that(calling(p.padded).with_args(0), raises(ValueError))


class TestJacobiAnger(unittest.TestCase):
    def test_zero_time_is_one(self) -> None:
        p = jacobi_anger_coefficients(0.0, 4)

        assert_that(p.degree, equal_to(9))
        assert_that(abs(p.coefficient(0) - 1), close_to(0, 1e-15))
        assert_that(float(np.max(np.abs(p.coeffs))), close_to(1.0, 1e-15))

    def test_first_order_coefficient(self) -> None:
        p = jacobi_anger_coefficients(1.0, 3)

        assert_that(p.coefficient(1).real, close_to(0.0, 1e-15))
        assert_that(p.coefficient(1).imag, close_to(-0.4400505857, 1e-10))
        assert_that(p.coefficient(-1).imag, close_to(-0.4400505857, 1e-10))

    def test_parity(self) -> None:
        p = jacobi_anger_coefficients(2.7, 5)

        even = p.coeffs[p.degrees % 2 == 0]
        odd = p.coeffs[p.degrees % 2 == 1]
        assert_that(float(np.max(np.abs(even.imag))), equal_to(0.0))
        assert_that(float(np.max(np.abs(odd.real))), equal_to(0.0))
        assert_that(p.reciprocity_defect(), equal_to(0.0))

    def test_sup_error_within_bound(self) -> None:
        r = degree_bound(1, 1e-3)
        p = jacobi_anger_coefficients(1.0, r)

        assert_that(truncation_error(p, 1.0, 512), less_than_or_equal_to(1e-3))

    def test_negative_order_rejected(self) -> None:
        assert_that(calling(jacobi_anger_coefficients).with_args(1.0, -1), raises(ValueError))


class TestTruncationError(unittest.TestCase):
    def test_constant_at_zero_time(self) -> None:
        p = LaurentPolynomial([1.0])

        assert_that(truncation_error(p, 0.0, 16), equal_to(0.0))

    def test_bound_degree(self) -> None:
        r = degree_bound(2, 1e-6)
        p = jacobi_anger_coefficients(2.0, r)

        assert_that(truncation_error(p, 2.0, 512), less_than_or_equal_to(1e-6))

    def test_coarse_grid_rejected(self) -> None:
        p = jacobi_anger_coefficients(2.0, 10)

        assert_that(calling(truncation_error).with_args(p, 2.0, 40), raises(ValueError))


@pytest.mark.parametrize('t', [0.5, 2.0, 8.0, 30.0])
@pytest.mark.parametrize('eps', [1e-3, 1e-6, 1e-10])
def test_degree_bound_is_sufficient(t: float, eps: float) -> None:
    r = degree_bound(t, eps)
    p = jacobi_anger_coefficients(t, r)

    assert_that(truncation_error(p, t, max(256, 8 * p.degree)), less_than_or_equal_to(eps))
