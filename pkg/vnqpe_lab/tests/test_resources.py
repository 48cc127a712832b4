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
    greater_than,
    has_properties,
    less_than_or_equal_to,
    raises,
)

from ..estimation import select_parameters
from ..resources import (
    AncillaRange,
    CostComponent,
    CostReport,
    aqft_band,
    cu_oracle_cost,
    lcp_encoding_cost,
    lcp_pipeline_cost,
    qet_cost,
    rotation_synthesis_cost,
    vnqpe_block_encoding_cost,
    vnqpe_query_complexity,
)

FIELDS = ('gate_count', 'depth', 'query_count')


class TestCostReport(unittest.TestCase):
    def test_totals_follow_components(self) -> None:
        report = CostReport.from_components(
            [CostComponent('a', 1.0, 2.0, 3.0), CostComponent('b', 0.5, 0.25)],
            qubits=4,
        )

        assert_that(report, has_properties(gate_count=1.5, depth=2.25, query_count=3.0))
        assert_that(report.component('b').depth, equal_to(0.25))

    def test_negative_cost(self) -> None:
        assert_that(
            calling(CostReport).with_args(-1.0, 0.0, 1, 0, 0.0),
            raises(ValueError),
        )

    def test_breakdown_mismatch(self) -> None:
        assert_that(
            calling(CostReport).with_args(
                2.0, 0.0, 1, 0, 0.0, breakdown=(CostComponent('a', 1.0),)
            ),
            raises(ValueError),
        )

    def test_unknown_component(self) -> None:
        report = CostReport.from_components([], qubits=1)

        assert_that(calling(report.component).with_args('missing'), raises(KeyError))


class TestLcpEncodingCost(unittest.TestCase):
    def test_reference_values(self) -> None:
        report = lcp_encoding_cost(4, 3, 2, 1e-3)

        assert_that(report.gate_count, close_to(39.63102, 1e-4))
        assert_that(report.depth, close_to(41.44653, 1e-4))
        assert_that(report.qubits, equal_to(5))

    def test_exact_encoding_leaves_qubit_term(self) -> None:
        assert_that(lcp_encoding_cost(4, 3, 2, 1.0).gate_count, close_to(12.0, 1e-12))

    def test_linear_in_terms(self) -> None:
        single = lcp_encoding_cost(4, 3, 4, 1e-6).gate_count
        double = lcp_encoding_cost(8, 3, 4, 1e-6).gate_count

        assert_that(double, close_to(2 * single, 1e-9))

    def test_too_few_ancillas(self) -> None:
        assert_that(
            calling(lcp_encoding_cost).with_args(4, 3, 1, 1e-3),
            raises(AncillaRange),
        )

    def test_too_many_ancillas(self) -> None:
        assert_that(
            calling(lcp_encoding_cost).with_args(4, 1, 9, 1e-3),
            raises(AncillaRange),
        )


class TestRotationAndQet(unittest.TestCase):
    def test_rotation_unit_log(self) -> None:
        assert_that(rotation_synthesis_cost(2 / math.e), close_to(1.0, 1e-12))

    def test_rotation_fine_accuracy(self) -> None:
        assert_that(rotation_synthesis_cost(1e-10), close_to(23.71899, 1e-4))

    def test_halving_adds_log_two(self) -> None:
        difference = rotation_synthesis_cost(5e-4) - rotation_synthesis_cost(1e-3)

        assert_that(difference, close_to(math.log(2), 1e-12))

    def test_rotation_range(self) -> None:
        assert_that(calling(rotation_synthesis_cost).with_args(0.0), raises(ValueError))

    def test_rotations_only(self) -> None:
        free = CostReport.from_components([], qubits=0)

        report = qet_cost(1, free, 2 / math.e)

        assert_that(report.gate_count, close_to(3.0, 1e-12))
        assert_that(report.depth, close_to(3.0, 1e-12))
        assert_that(report.query_count, equal_to(1))

    def test_layout(self) -> None:
        report = qet_cost(5, lcp_encoding_cost(4, 3, 2, 1e-3), 1e-3)

        assert_that(report, has_properties(qubits=7, ancillas=2))
        assert_that(
            report.component('signal_oracle').gate_count,
            close_to(5 * 39.63102, 1e-3),
        )

    def test_degree_range(self) -> None:
        free = CostReport.from_components([], qubits=0)

        assert_that(calling(qet_cost).with_args(0, free, 1e-3), raises(ValueError))


class TestQueryModels(unittest.TestCase):
    def test_reference_value(self) -> None:
        assert_that(vnqpe_query_complexity(1, 0.5, 0.25, 1e-3), close_to(13.41423, 1e-3))

    def test_exact_encoding_kills_log_term(self) -> None:
        assert_that(vnqpe_query_complexity(1, 0.5, 0.25, 1.0), close_to(8.0, 1e-12))

    def test_block_encoding_reference(self) -> None:
        report = vnqpe_block_encoding_cost(1, 0.5, 0.25, 1e-3, 0.05, 1, 2)

        assert_that(report.query_count, close_to(13.41423, 1e-3))
        assert_that(report.gate_count, close_to(32.97884, 1e-3))
        assert_that(report.qubits, equal_to(10))
        assert_that(report.clamped, equal_to(False))

    def test_cu_oracle_reference(self) -> None:
        report = cu_oracle_cost(1.0, 0.5, 0.2, 0.05)

        assert_that(report.query_count, close_to(634.795, 1e-3))
        assert_that(report.gate_count, close_to(3291.125, 1e-2))
        assert_that(report.qubits, equal_to(12))

    def test_cu_oracle_precision_scaling(self) -> None:
        coarse = cu_oracle_cost(1.0, 0.5, 0.2, 0.05).query_count
        fine = cu_oracle_cost(1.0, 0.5, 0.2, 0.025).query_count

        assert_that(fine, greater_than(2 * coarse))

    def test_cu_oracle_coarse_precision(self) -> None:
        assert_that(
            calling(cu_oracle_cost).with_args(1.0, 0.5, 0.2, 0.75),
            raises(ValueError),
        )


class TestLcpPipelineCost(unittest.TestCase):
    def test_reference_values(self) -> None:
        report = lcp_pipeline_cost(2, 1, 3, 0.75, 1.0, 0.25, 0.25)

        assert_that(report.component('simulation').gate_count, close_to(144.0, 1e-9))
        assert_that(report.component('inverse_qft').gate_count, close_to(13.16138, 1e-4))
        assert_that(report.gate_count, close_to(157.16138, 1e-4))
        assert_that(report.depth, close_to(52.71142, 1e-4))
        assert_that(report.query_count, close_to(6.0, 1e-12))
        assert_that(report, has_properties(qubits=9, ancillas=5, clamped=True))

    def test_coupled_terms_need_ancillas(self) -> None:
        assert_that(
            calling(lcp_pipeline_cost).with_args(2, 1, 2, 0.75, 1.0, 0.25, 0.25),
            raises(AncillaRange),
        )

    def test_single_pointer_qubit(self) -> None:
        report = lcp_pipeline_cost(2, 1, 3, 0.75, 1.0, 0.25, 1.0)

        assert_that(report.qubits, equal_to(7))
        assert_that(report.ancillas, equal_to(2))


class TestAqftBand(unittest.TestCase):
    def test_reference_value(self) -> None:
        assert_that(aqft_band(4, 0.25), equal_to(3))

    def test_small_delta_uses_full_transform(self) -> None:
        assert_that(aqft_band(8, 1e-6), equal_to(8))

    def test_never_exceeds_pointer(self) -> None:
        for r in range(1, 11):
            for delta in (0.9, 0.5, 0.1, 1e-3):
                assert_that(aqft_band(r, delta), less_than_or_equal_to(r))


def _costs(value: CostReport | float) -> tuple[float, ...]:
    if isinstance(value, CostReport):
        return tuple(getattr(value, name) for name in FIELDS)
    return (value,)


def _assert_nonincreasing(low: CostReport | float, high: CostReport | float) -> None:
    for before, after in zip(_costs(low), _costs(high)):
        assert_that(after, less_than_or_equal_to(before * (1 + 1e-12) + 1e-12))


@pytest.mark.parametrize('seed', range(200))
def test_monotonicity(seed: int) -> None:
    rng = np.random.default_rng(seed)
    terms = int(rng.integers(1, 9))
    n = int(rng.integers(1, 5))
    n_anc = max(1, math.ceil(math.log2(2 * terms)))
    delta = float(rng.uniform(0.05, 0.5))
    delta_k = float(rng.uniform(0.5, 2.0))
    eps_vN = delta_k * float(rng.uniform(1 / 16, 1 / 4))
    eps = float(10 ** rng.uniform(-8, -2))
    beta = float(rng.uniform(0.25, 4.0))

    encoding = lcp_encoding_cost(terms, n, n_anc, eps)
    _assert_nonincreasing(lcp_encoding_cost(2 * terms, n, n_anc, eps), encoding)
    _assert_nonincreasing(lcp_encoding_cost(terms, n + 1, n_anc, eps), encoding)
    _assert_nonincreasing(encoding, lcp_encoding_cost(terms, n, n_anc, 10 * eps))

    _assert_nonincreasing(rotation_synthesis_cost(eps), rotation_synthesis_cost(10 * eps))
    _assert_nonincreasing(qet_cost(7, encoding, eps), qet_cost(7, encoding, 10 * eps))

    query = vnqpe_query_complexity(beta, delta_k, delta, eps)
    _assert_nonincreasing(query, vnqpe_query_complexity(beta, delta_k, 1.5 * delta, eps))
    _assert_nonincreasing(query, vnqpe_query_complexity(beta, delta_k, delta, 10 * eps))
    _assert_nonincreasing(vnqpe_query_complexity(2 * beta, delta_k, delta, eps), query)
    _assert_nonincreasing(vnqpe_query_complexity(beta, delta_k / 2, delta, eps), query)

    def block_encoding(**changes: float) -> CostReport:
        arguments = dict(
            beta=beta, delta_k=delta_k, delta=delta, eps_be=eps, eps_vN=eps_vN, n=n, n_anc=2
        )
        arguments.update(changes)
        return vnqpe_block_encoding_cost(**arguments)

    base = block_encoding()
    _assert_nonincreasing(base, block_encoding(delta=1.5 * delta))
    _assert_nonincreasing(base, block_encoding(eps_be=10 * eps))
    _assert_nonincreasing(base, block_encoding(eps_vN=2 * eps_vN))
    _assert_nonincreasing(block_encoding(beta=2 * beta), base)
    _assert_nonincreasing(block_encoding(delta_k=delta_k / 2).query_count, base.query_count)

    oracle = cu_oracle_cost(beta, delta_k, delta, eps_vN)
    _assert_nonincreasing(oracle, cu_oracle_cost(beta, delta_k, 1.5 * delta, eps_vN))
    _assert_nonincreasing(oracle, cu_oracle_cost(beta, delta_k, delta, 2 * eps_vN))
    _assert_nonincreasing(cu_oracle_cost(2 * beta, delta_k, delta, eps_vN), oracle)

    def pipeline(**changes: float) -> CostReport:
        arguments = dict(
            num_terms=terms,
            n=n,
            n_anc=8,
            alpha=beta,
            delta_k=delta_k,
            delta=delta,
            eps_vN=eps_vN,
        )
        arguments.update(changes)
        return lcp_pipeline_cost(**arguments)

    full = pipeline()
    _assert_nonincreasing(full, pipeline(delta=1.5 * delta))
    _assert_nonincreasing(full, pipeline(eps_vN=2 * eps_vN))
    _assert_nonincreasing(pipeline(num_terms=2 * terms), full)
    _assert_nonincreasing(pipeline(n=n + 1), full)
    _assert_nonincreasing(pipeline(alpha=2 * beta), full)


def test_composition_matches_pipeline_scaling() -> None:
    ratios = []
    for terms in (2, 4):
        for n in (1, 2):
            for alpha in (0.5, 1.0):
                for delta in (0.1, 0.25):
                    for eps_vN in (0.25, 0.125):
                        params = select_parameters(1.0, eps_vN, delta, alpha)
                        encoding = lcp_encoding_cost(
                            (1 + params.r) * terms, n + params.r, 6, params.eps_be
                        )
                        composed = qet_cost(params.d, encoding, params.eps_r)
                        model = lcp_pipeline_cost(terms, n, 6, alpha, 1.0, delta, eps_vN)
                        ratios.append(
                            composed.gate_count / model.component('simulation').gate_count
                        )

    assert_that(max(ratios) / min(ratios), less_than_or_equal_to(4.0))
