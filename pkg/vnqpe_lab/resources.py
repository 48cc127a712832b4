# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Asymptotic Clifford+T cost model.

Every big-O expression is evaluated with unit constants and natural
logarithms, except where a base-2 logarithm is explicit. Results are in
"model units": they are meant for comparing parameter choices and scaling,
not for absolute gate counts. Log factors that would go negative are clamped
at zero and the report is flagged.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

from .estimation import ParameterError, pointer_qubits
from .util import clamped_log

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-9


class AncillaRange(ValueError):
    """Raise when the ancilla count is outside what the LCP construction supports."""

    pass


@dataclass(frozen=True)
class CostComponent:
    label: str
    gate_count: float = 0.0
    depth: float = 0.0
    query_count: float = 0.0


@dataclass(frozen=True)
class CostReport:
    gate_count: float
    depth: float
    qubits: int
    ancillas: int
    query_count: float
    breakdown: tuple[CostComponent, ...] = ()
    clamped: bool = False

    def __post_init__(self) -> None:
        values = (self.gate_count, self.depth, self.qubits, self.ancillas, self.query_count)
        if any(value < 0 for value in values):
            raise ValueError(f'negative cost in {values}')
        for name in ('gate_count', 'depth', 'query_count'):
            total = getattr(self, name)
            parts = sum(getattr(component, name) for component in self.breakdown)
            if self.breakdown and not math.isclose(
                total, parts, rel_tol=SUM_TOLERANCE, abs_tol=SUM_TOLERANCE
            ):
                raise ValueError(f'{name} {total} does not match its breakdown {parts}')

    @classmethod
    def from_components(
        cls,
        components: Iterable[CostComponent],
        qubits: int,
        ancillas: int = 0,
        clamped: bool = False,
    ) -> CostReport:
        breakdown = tuple(components)
        return cls(
            gate_count=math.fsum(c.gate_count for c in breakdown),
            depth=math.fsum(c.depth for c in breakdown),
            qubits=qubits,
            ancillas=ancillas,
            query_count=math.fsum(c.query_count for c in breakdown),
            breakdown=breakdown,
            clamped=clamped,
        )

    def component(self, label: str) -> CostComponent:
        for component in self.breakdown:
            if component.label == label:
                return component
        raise KeyError(label)


def _check_open_unit(name: str, value: float, closed_right: bool = False) -> None:
    upper_ok = value <= 1 if closed_right else value < 1
    if not (value > 0 and upper_ok):
        bracket = ']' if closed_right else ')'
        raise ParameterError(f'{name} must lie in (0, 1{bracket}, got {value}')


def _check_positive(name: str, value: float) -> None:
    if value <= 0:
        raise ParameterError(f'{name} must be positive, got {value}')


def _check_ancillas(num_terms: int, n: int, n_anc: int) -> None:
    if num_terms < 1 or n < 1:
        raise ParameterError(f'need at least one term and one qubit, got {num_terms}, {n}')
    lower = math.ceil(math.log2(num_terms))
    if not lower <= n_anc <= 2**n * num_terms:
        raise AncillaRange(
            f'{n_anc} ancillas outside [{lower}, {2**n * num_terms}] for {num_terms} terms'
        )


def _ancilla_depth_factor(n_anc: int) -> float:
    # log(n_anc) / n_anc, held at its n_anc = e value below e
    return math.log(max(n_anc, math.e)) / max(n_anc, 1)


def _note_clamp(where: str, fired: bool) -> bool:
    if fired:
        logger.warning('Clamped a negative log factor to zero in %s', where)
    return fired


def lcp_encoding_cost(num_terms: int, n: int, n_anc: int, eps: float) -> CostReport:
    """Clifford+T cost of the variable-ancilla block-encoding of an LCP."""
    _check_ancillas(num_terms, n, n_anc)
    _check_open_unit('eps', eps, closed_right=True)
    log_inverse = math.log(1 / eps)
    gates = num_terms * (n + log_inverse)
    depth = num_terms * n * log_inverse * _ancilla_depth_factor(n_anc)
    logger.debug('LCP encoding of %d terms: %.6g gates, depth %.6g', num_terms, gates, depth)
    return CostReport.from_components(
        [CostComponent('lcp_encoding', gate_count=gates, depth=depth)],
        qubits=n + n_anc,
    )


def rotation_synthesis_cost(eps_r: float) -> float:
    """Gates (and depth) for an eps_r-close single-qubit rotation.

    >>> round(rotation_synthesis_cost(0.02), 6)
    4.60517
    """
    _check_open_unit('eps_r', eps_r)
    return math.log(2 / eps_r)


def qet_cost(d: int, be_cost: CostReport, eps_r: float) -> CostReport:
    if d < 1:
        raise ParameterError(f'degree must be at least 1, got {d}')
    rotation = rotation_synthesis_cost(eps_r)
    rotations = (2 * d + 1) * rotation
    return CostReport.from_components(
        [
            CostComponent(
                'signal_oracle',
                gate_count=d * be_cost.gate_count,
                depth=d * be_cost.depth,
                query_count=d,
            ),
            CostComponent('processing_rotations', gate_count=rotations, depth=rotations),
        ],
        qubits=be_cost.qubits + 2,
        ancillas=max(be_cost.ancillas, 2),
        clamped=be_cost.clamped,
    )


def _query_terms(beta: float, delta_k: float, delta: float, eps_be: float) -> tuple[float, float]:
    _check_positive('beta', beta)
    _check_positive('delta_k', delta_k)
    _check_open_unit('delta', delta)
    _check_open_unit('eps_BE', eps_be, closed_right=True)
    log_inverse = math.log(1 / eps_be)
    leading = beta / (delta * delta_k)
    tail = log_inverse / math.log(math.e + delta * delta_k / beta * log_inverse)
    return leading, tail


def vnqpe_query_complexity(beta: float, delta_k: float, delta: float, eps_be: float) -> float:
    leading, tail = _query_terms(beta, delta_k, delta, eps_be)
    return leading + tail


def vnqpe_block_encoding_cost(
    beta: float,
    delta_k: float,
    delta: float,
    eps_be: float,
    eps_vN: float,
    n: int,
    n_anc: int,
) -> CostReport:
    """Queries and extra gates of the estimation given any block-encoding of H (x) p."""
    leading, tail = _query_terms(beta, delta_k, delta, eps_be)
    r = pointer_qubits(delta_k, eps_vN)
    pointer, fired = clamped_log(delta_k / eps_vN, 2)
    return CostReport.from_components(
        [
            CostComponent(
                'block_encoding_calls',
                gate_count=leading + 4 * tail,
                depth=leading + 4 * tail,
                query_count=leading + tail,
            ),
            CostComponent('pointer', gate_count=pointer, depth=pointer),
        ],
        qubits=n + n_anc + 2 + r,
        clamped=_note_clamp('vnqpe_block_encoding_cost', fired),
    )


def cu_oracle_cost(
    norm_h: float, delta_k: float, delta: float, eps_vN: float, n: int = 1
) -> CostReport:
    """Cost of the estimation when only controlled e^{iH} is available.

    query_count counts controlled-U and its inverse; gate_count the
    additional one- and two-qubit gates.
    """
    _check_positive('norm_h', norm_h)
    _check_open_unit('delta', delta)
    r = pointer_qubits(delta_k, eps_vN)
    resolution, fired_resolution = clamped_log(delta_k / eps_vN, 2)
    leading = norm_h / (delta * eps_vN) + resolution
    query_log, fired_query = clamped_log(math.sqrt(norm_h * delta_k) / (delta * eps_vN), 2)
    gate_log, fired_gate = clamped_log(math.sqrt(norm_h) * delta_k / (delta * eps_vN), 2)
    gates = leading * gate_log**2
    return CostReport.from_components(
        [
            CostComponent('controlled_u', query_count=leading * query_log),
            CostComponent('gates', gate_count=gates, depth=gates),
        ],
        qubits=6 + r + n,
        clamped=_note_clamp('cu_oracle_cost', fired_resolution or fired_query or fired_gate),
    )


def aqft_band(r: int, delta: float) -> int:
    """Rotation band of the approximate inverse transform.

    >>> aqft_band(4, 0.25)
    3
    """
    if r < 1:
        raise ParameterError(f'pointer size must be at least 1, got {r}')
    _check_open_unit('delta', delta)
    return min(r, max(2, math.ceil(math.log(r / delta))))


def _aqft_cost(r: int, delta: float) -> tuple[float, bool]:
    band = math.log(r / delta)
    inner, fired = clamped_log(band / delta)
    return r * band + band * inner, fired


def lcp_pipeline_cost(
    num_terms: int,
    n: int,
    n_anc: int,
    alpha: float,
    delta_k: float,
    delta: float,
    eps_vN: float,
) -> CostReport:
    """Whole estimation for an LCP Hamiltonian, in Clifford+T.

    The pointer coupling turns |P| terms into (1 + r)|P| terms on n + r
    qubits; the simulation and approximate inverse transform are reported
    as separate components.
    """
    _check_positive('alpha', alpha)
    _check_open_unit('delta', delta)
    r = pointer_qubits(delta_k, eps_vN)
    _check_ancillas((1 + r) * num_terms, n + r, n_anc)
    degree = alpha / (delta * delta_k) + r
    accuracy, fired_accuracy = clamped_log(alpha * delta_k / (alpha + delta * delta_k * r))
    aqft, fired_aqft = _aqft_cost(r, delta)
    simulation_gates = num_terms * r * degree * (n + r + accuracy)
    simulation_depth = (
        num_terms * r * n * degree * _ancilla_depth_factor(n_anc) * (r + accuracy)
    )
    band = aqft_band(r, delta)
    report = CostReport.from_components(
        [
            CostComponent(
                'simulation',
                gate_count=simulation_gates,
                depth=simulation_depth,
                query_count=degree,
            ),
            CostComponent('inverse_qft', gate_count=aqft, depth=aqft),
        ],
        qubits=n + n_anc + 2 + r,
        ancillas=max(3 * band - 4, 2),
        clamped=_note_clamp('lcp_pipeline_cost', fired_accuracy or fired_aqft),
    )
    logger.debug(
        'LCP pipeline r=%d band=%d: %.6g gates, depth %.6g',
        r,
        band,
        report.gate_count,
        report.depth,
    )
    return report
