# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import logging
import os
import sys
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError
from twisted.python import usage
from xivo.xivo_logging import setup_logging, silence_loggers

from .config import ConfigError, Options, VnqpeConfigDict, get_config
from .estimation import (
    InfeasibleDelta,
    QpeParams,
    analytic_hit_probability,
    dominant_eigen_index,
    eigen_leakage,
    pointer_qubits,
    run_vnqpe,
    select_parameters,
    spectral_gap,
    success_probability_bound,
)
from .numerics import ComplexMatrix, NumericalError, hermitian_eigendecomposition
from .pauli import LCPHamiltonian, lcp_to_matrix, parse_lcp
from .reporting import (
    COST_COLUMNS,
    RESULT_COLUMNS,
    SWEEP_COLUMNS,
    Record,
    cost_record,
    infeasible_sweep_record,
    result_records,
    summary_path,
    summary_record,
    write_records,
    write_summary,
)
from .resources import (
    CostReport,
    cu_oracle_cost,
    lcp_pipeline_cost,
    vnqpe_block_encoding_cost,
    vnqpe_query_complexity,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4

_SIMULATION_MODES = {'qet': 'qet', 'exact-oracle': 'exact'}


@dataclass(frozen=True)
class Problem:
    h: LCPHamiltonian
    matrix: ComplexMatrix
    psi: NDArray[np.complex128]
    index: int
    delta_k: float
    target: float
    leakage: float


def _initial_state(initial_state: int | str, matrix: ComplexMatrix) -> NDArray[np.complex128]:
    dim = matrix.shape[0]
    if isinstance(initial_state, int):
        if initial_state >= dim:
            raise ConfigError(f'eigenstate index {initial_state} outside [0, {dim})')
        return hermitian_eigendecomposition(matrix).eigenvectors[:, initial_state]
    amplitudes = np.loadtxt(initial_state, ndmin=2)
    psi = amplitudes[:, 0].astype(np.complex128)
    if amplitudes.shape[1] > 1:
        psi += 1j * amplitudes[:, 1]
    if len(psi) != dim:
        raise ConfigError(f'{initial_state} holds {len(psi)} amplitudes, H has dimension {dim}')
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ConfigError(f'{initial_state} holds the zero vector')
    return psi / norm


def load_problem(run: Mapping[str, Any]) -> Problem:
    if run['hamiltonian_path'] is None:
        raise ConfigError('no Hamiltonian given, set run.hamiltonian_path')
    with open(run['hamiltonian_path']) as f:
        h = parse_lcp(f)
    matrix = lcp_to_matrix(h)
    psi = _initial_state(run['initial_state'], matrix)
    index = dominant_eigen_index(matrix, psi)
    delta_k = run['delta_k'] if run['delta_k'] is not None else spectral_gap(matrix, index)
    target = float(hermitian_eigendecomposition(matrix).eigenvalues[index])
    logger.info('Target eigenvalue #%d, gap %.6g', index, delta_k)
    return Problem(
        h=h,
        matrix=matrix,
        psi=psi,
        index=index,
        delta_k=float(delta_k),
        target=target,
        leakage=eigen_leakage(matrix, psi, index),
    )


def _select(
    problem: Problem,
    delta: float,
    eps_vN: float,
    eps_be: float,
    r: Optional[int] = None,
    t: Optional[float] = None,
) -> QpeParams:
    if r is None:
        r = pointer_qubits(problem.delta_k, eps_vN)
    # alpha of the pointer-coupled LCP
    beta = problem.h.alpha * (1 - 2.0**-r)
    return select_parameters(
        problem.delta_k,
        eps_vN,
        delta,
        beta,
        eps_be_available=eps_be,
        pointer_size=r,
        time=t,
    )


def cmd_simulate(config: VnqpeConfigDict) -> None:
    run = config['run']
    problem = load_problem(run)
    params = _select(problem, run['delta'], run['eps_vN'], run['eps_be'])
    report = run_vnqpe(
        problem.h,
        problem.psi,
        params,
        shots=run['shots'],
        seed=run['seed'],
        mode=_SIMULATION_MODES[run['simulation_mode']],
        sign=run['kernel_sign'],
        band=run['band'],
        hamiltonian_matrix=problem.matrix,
        max_degree_bumps=config['simulation']['max_degree_bumps'],
    )
    write_records(run['output_path'], RESULT_COLUMNS, result_records(report, params))
    write_summary(summary_path(run['output_path']), summary_record(report, params, run))


def _thm3(estimate: Mapping[str, Any]) -> CostReport:
    return vnqpe_block_encoding_cost(
        estimate['beta'],
        estimate['delta_k'],
        estimate['delta'],
        estimate['eps_be'],
        estimate['eps_vN'],
        estimate['n'],
        estimate['n_anc'],
    )


def _cor1(estimate: Mapping[str, Any]) -> CostReport:
    return cu_oracle_cost(
        estimate['norm_h'],
        estimate['delta_k'],
        estimate['delta'],
        estimate['eps_vN'],
        estimate['n'],
    )


def _cor2(estimate: Mapping[str, Any]) -> CostReport:
    return lcp_pipeline_cost(
        estimate['num_terms'],
        estimate['n'],
        estimate['n_anc'],
        estimate['alpha'],
        estimate['delta_k'],
        estimate['delta'],
        estimate['eps_vN'],
    )


_COST_MODELS: dict[str, Callable[[Mapping[str, Any]], CostReport]] = {
    'thm3': _thm3,
    'cor1': _cor1,
    'cor2': _cor2,
}


def cmd_estimate(config: VnqpeConfigDict) -> None:
    estimate = config['estimate']
    models = [model.strip() for model in estimate['models'].split(',')]
    records = [cost_record(model, _COST_MODELS[model](estimate)) for model in models]
    write_records(estimate['output_path'], COST_COLUMNS, records)


def sweep_grid(sweep: Mapping[str, Any]) -> list[float]:
    space = np.geomspace if sweep['spacing'] == 'geometric' else np.linspace
    grid = [float(value) for value in space(sweep['start'], sweep['stop'], sweep['points'])]
    if sweep['axis'] == 'r':
        grid = [float(round(value)) for value in grid]
    return grid


def sweep_point(problem: Problem, run: Mapping[str, Any], axis: str, value: float) -> Record:
    delta = value if axis == 'delta' else run['delta']
    eps_vN = value if axis == 'eps_vN' else run['eps_vN']
    eps_be = value if axis == 'eps_BE' else run['eps_be']
    r = int(value) if axis == 'r' else None
    t = value if axis == 't' else None
    try:
        params = _select(problem, delta, eps_vN, eps_be, r=r, t=t)
    except InfeasibleDelta as e:
        logger.warning('Sweep point %s=%.6g is infeasible: %s', axis, value, e)
        return infeasible_sweep_record(axis, value, delta, eps_vN)
    return {
        'axis': axis,
        'value': value,
        'feasible': 1,
        'r': params.r,
        'k': params.k,
        't': params.t,
        't_prime': params.t_prime,
        'degree': params.degree,
        'd': params.d,
        'delta': delta,
        'eps_vN': eps_vN,
        'eps_be': params.eps_be,
        'delta_floor': params.delta_floor,
        'success_prob_analytic': success_probability_bound(
            params, params.eps_hs, problem.leakage
        ),
        'hit_probability': analytic_hit_probability(problem.target, params.t, params.r, eps_vN),
        'query_complexity': vnqpe_query_complexity(
            params.beta, problem.delta_k, delta, params.eps_be
        ),
    }


def cmd_sweep(config: VnqpeConfigDict) -> None:
    sweep = config['sweep']
    grid = sweep_grid(sweep)
    if not grid:
        raise ConfigError('the sweep grid is empty')
    problem = load_problem(config['run'])
    records = [sweep_point(problem, config['run'], sweep['axis'], value) for value in grid]
    write_records(sweep['output_path'], SWEEP_COLUMNS, records)


_COMMANDS: dict[str, Callable[[VnqpeConfigDict], None]] = {
    'simulate': cmd_simulate,
    'estimate': cmd_estimate,
    'sweep': cmd_sweep,
}


def _configure_logging(config: VnqpeConfigDict) -> None:
    setup_logging(config['general']['log_file'], debug=config['general']['debug'])
    silence_loggers(['twisted'], logging.WARNING)


def _fail(code: int, message: str) -> int:
    print(f'vnqpe-lab: {message}', file=sys.stderr)
    return code


def run(argv: list[str], environ: Mapping[str, str] = os.environ) -> int:
    options = Options()
    try:
        options.parseOptions(argv)
    except usage.UsageError as e:
        return _fail(EXIT_CONFIG, f'{e}; see --help')

    try:
        config = get_config(options, environ)
    except (ConfigError, OSError) as e:
        return _fail(EXIT_CONFIG, str(e))
    _configure_logging(config)

    command = options.subCommand
    logger.debug('Running %s', command)
    try:
        _COMMANDS[command](config)
    except InfeasibleDelta as e:
        logger.error('Infeasible parameters', exc_info=True)
        return _fail(EXIT_INFEASIBLE, str(e))
    except NumericalError as e:
        logger.error('Numerical failure', exc_info=True)
        return _fail(EXIT_NUMERICAL, f'{type(e).__name__}: {e}')
    except (ConfigError, ValidationError, ValueError, OSError) as e:
        logger.error('Invalid input', exc_info=True)
        return _fail(EXIT_CONFIG, str(e))
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))
