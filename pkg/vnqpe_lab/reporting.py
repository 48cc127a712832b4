# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""CSV and YAML writers for the command-line front end.

Floats are written with 17 significant digits and a '.' decimal point so
that every file reparses into the values that produced it.
"""

from __future__ import annotations

import csv
import logging
import math
import sys
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict
from pathlib import Path
from typing import Any, Optional, TextIO, Union

import yaml

from .estimation import EstimateReport, QpeParams, estimate_from_x
from .resources import CostReport
from .util import format_float

logger = logging.getLogger(__name__)

Record = dict[str, Union[int, float, str]]

RESULT_COLUMNS = ('x', 'probability', 'lambda_estimate', 'shots_observed')
COST_COLUMNS = (
    'model',
    'gate_count',
    'depth',
    'qubits',
    'ancillas',
    'query_count',
    'clamped',
)
SWEEP_COLUMNS = (
    'axis',
    'value',
    'feasible',
    'r',
    'k',
    't',
    't_prime',
    'degree',
    'd',
    'delta',
    'eps_vN',
    'eps_be',
    'delta_floor',
    'success_prob_analytic',
    'hit_probability',
    'query_complexity',
)
_INTEGER_COLUMNS = frozenset(
    {'x', 'shots_observed', 'qubits', 'ancillas', 'clamped', 'feasible', 'r', 'k', 'degree', 'd'}
)
_TEXT_COLUMNS = frozenset({'model', 'axis'})


def _format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _parse_cell(column: str, text: str) -> Union[int, float, str]:
    if column in _TEXT_COLUMNS:
        return text
    if column in _INTEGER_COLUMNS:
        return int(text)
    return float(text)


def write_records(
    destination: Optional[str], columns: Sequence[str], records: Iterable[Mapping[str, Any]]
) -> None:
    """Write records as CSV to a file, or to standard output when no path is given."""
    if destination is None:
        _write_csv(sys.stdout, columns, records)
        return
    with open(destination, 'w', newline='') as f:
        _write_csv(f, columns, records)
    logger.info('Wrote %s', destination)


def _write_csv(f: TextIO, columns: Sequence[str], records: Iterable[Mapping[str, Any]]) -> None:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(columns)
    for record in records:
        writer.writerow([_format_cell(record[column]) for column in columns])


def read_records(path: str) -> list[Record]:
    with open(path, newline='') as f:
        reader = csv.DictReader(f)
        return [
            {column: _parse_cell(column, text) for column, text in row.items()} for row in reader
        ]


def result_records(report: EstimateReport, params: QpeParams) -> list[Record]:
    observed = report.shots_observed
    return [
        {
            'x': x,
            'probability': float(probability),
            'lambda_estimate': estimate_from_x(x, params.t),
            'shots_observed': int(observed[x]),
        }
        for x, probability in enumerate(report.distribution)
    ]


def cost_record(model: str, report: CostReport) -> Record:
    return {
        'model': model,
        'gate_count': report.gate_count,
        'depth': report.depth,
        'qubits': report.qubits,
        'ancillas': report.ancillas,
        'query_count': report.query_count,
        'clamped': int(report.clamped),
    }


def infeasible_sweep_record(axis: str, value: float, delta: float, eps_vN: float) -> Record:
    record: Record = {column: math.nan for column in SWEEP_COLUMNS}
    record.update(
        axis=axis,
        value=value,
        feasible=0,
        r=0,
        k=0,
        degree=0,
        d=0,
        delta=delta,
        eps_vN=eps_vN,
    )
    return record


def _plain(value: Any) -> Any:
    # numpy scalars are not representable in safe YAML
    return float(value) if isinstance(value, float) else value


def summary_path(output_path: str) -> str:
    return str(Path(output_path).with_suffix('.summary.yml'))


def summary_record(
    report: EstimateReport, params: QpeParams, run: Mapping[str, Any]
) -> dict[str, Any]:
    return {
        'lambda_hat': float(report.lambda_hat),
        'x_hat': int(report.x_hat),
        'success_prob_analytic': float(report.success_prob_analytic),
        'postselect_prob': float(report.postselect_prob),
        'hit_fraction': float(report.hit_fraction),
        'hit_probability': float(report.hit_probability),
        'target_eigenvalue': float(report.target_eigenvalue),
        'mode': report.mode,
        'shots': int(report.shots),
        'seed': report.seed,
        'params': {name: _plain(value) for name, value in asdict(params).items()},
        'run': dict(run),
    }


def write_summary(path: str, record: Mapping[str, Any]) -> None:
    with open(path, 'w') as f:
        yaml.safe_dump(dict(record), f, default_flow_style=False, sort_keys=False)
    logger.info('Wrote summary %s', path)
