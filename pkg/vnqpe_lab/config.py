# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

"""Application configuration module.

Read raw parameter values from different sources and return a dictionary
with well-defined values. Sources, from lowest to highest priority: the
built-in defaults, the YAML configuration file hierarchy, the run file,
the command line, and the VNQPE_SEED environment variable.

The following parameters are defined:
    config_file
    extra_config_files
    general:
        log_file
        debug
    run:
        hamiltonian_path
        delta
        eps_vN
        delta_k
            Computed from the spectrum when omitted.
        shots
        seed
        simulation_mode
            Either qet or exact-oracle.
        initial_state
            An eigenstate index (ascending eigenvalues) or an amplitude file.
        output_path
        kernel_sign
        band
            Rotation band of the approximate inverse transform.
        eps_be
            Declared accuracy of the block-encoding, feeding the delta floor.
    simulation:
        max_degree_bumps
    estimate:
        models
            Comma-separated list of thm3, cor1 and cor2.
        beta, alpha, norm_h, delta_k, delta, eps_be, eps_vN, num_terms, n, n_anc
        output_path
    sweep:
        axis
        start
        stop
        points
        spacing
            Either geometric or linear.
        output_path

Run file grammar, one entry per line:
    # comment
    key = value
    section.key = value
Keys without a section belong to the run section; an empty value means None.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from typing import Any, TypedDict, Union, cast

from pydantic import ValidationError
from twisted.python import usage
from xivo.chain_map import ChainMap
from xivo.config_helper import read_config_file_hierarchy

from .schemas import (
    EstimateConfigDict,
    EstimateSchema,
    GeneralConfigDict,
    GeneralSchema,
    RunConfigDict,
    RunConfigSchema,
    SimulationConfigDict,
    SimulationSchema,
    SweepConfigDict,
    SweepSchema,
)

logger = logging.getLogger(__name__)

SEED_ENVIRONMENT_VARIABLE = 'VNQPE_SEED'


class VnqpeConfigDict(TypedDict):
    config_file: str
    extra_config_files: str
    general: GeneralConfigDict
    run: RunConfigDict
    simulation: SimulationConfigDict
    estimate: EstimateConfigDict
    sweep: SweepConfigDict


_DEFAULT_CONFIG: VnqpeConfigDict = {
    'config_file': '/etc/vnqpe-lab/config.yml',
    'extra_config_files': '/etc/vnqpe-lab/conf.d',
    'general': {
        'log_file': 'vnqpe-lab.log',
        'debug': False,
    },
    'run': {
        'hamiltonian_path': None,
        'delta': 0.25,
        'eps_vN': 0.05,
        'delta_k': None,
        'shots': 1000,
        'seed': None,
        'simulation_mode': 'qet',
        'initial_state': 0,
        'output_path': 'results.csv',
        'kernel_sign': 1,
        'band': None,
        'eps_be': 0.0,
    },
    'simulation': {
        'max_degree_bumps': 10,
    },
    'estimate': {
        'models': 'thm3,cor1,cor2',
        'beta': 1.0,
        'alpha': 1.0,
        'norm_h': 1.0,
        'delta_k': 0.5,
        'delta': 0.25,
        'eps_be': 1e-3,
        'eps_vN': 0.05,
        'num_terms': 4,
        'n': 2,
        'n_anc': 6,
        'output_path': None,
    },
    'sweep': {
        'axis': 'delta',
        'start': 0.05,
        'stop': 0.5,
        'points': 4,
        'spacing': 'geometric',
        'output_path': None,
    },
}

_SECTION_SCHEMAS = {
    'general': GeneralSchema,
    'run': RunConfigSchema,
    'simulation': SimulationSchema,
    'estimate': EstimateSchema,
    'sweep': SweepSchema,
}

_RUN_OPTIONS = [
    # (<option name, (<section, param name>)>)
    ('hamiltonian-path', ('run', 'hamiltonian_path')),
    ('delta', ('run', 'delta')),
    ('eps-vn', ('run', 'eps_vN')),
    ('delta-k', ('run', 'delta_k')),
    ('shots', ('run', 'shots')),
    ('seed', ('run', 'seed')),
    ('simulation-mode', ('run', 'simulation_mode')),
    ('initial-state', ('run', 'initial_state')),
    ('kernel-sign', ('run', 'kernel_sign')),
    ('band', ('run', 'band')),
    ('eps-be', ('run', 'eps_be')),
    ('max-degree-bumps', ('simulation', 'max_degree_bumps')),
]

_OPTION_TO_PARAM_LIST = {
    'simulate': _RUN_OPTIONS + [('output-path', ('run', 'output_path'))],
    'estimate': [
        ('model', ('estimate', 'models')),
        ('beta', ('estimate', 'beta')),
        ('alpha', ('estimate', 'alpha')),
        ('norm-h', ('estimate', 'norm_h')),
        ('delta-k', ('estimate', 'delta_k')),
        ('delta', ('estimate', 'delta')),
        ('eps-be', ('estimate', 'eps_be')),
        ('eps-vn', ('estimate', 'eps_vN')),
        ('num-terms', ('estimate', 'num_terms')),
        ('qubits', ('estimate', 'n')),
        ('n-anc', ('estimate', 'n_anc')),
        ('output-path', ('estimate', 'output_path')),
    ],
    'sweep': _RUN_OPTIONS
    + [
        ('axis', ('sweep', 'axis')),
        ('start', ('sweep', 'start')),
        ('stop', ('sweep', 'stop')),
        ('points', ('sweep', 'points')),
        ('spacing', ('sweep', 'spacing')),
        ('output-path', ('sweep', 'output_path')),
    ],
}


class ConfigError(Exception):
    """Raise when an error occur while getting configuration."""

    pass


class _RunOptions(usage.Options):
    optParameters = [
        ('hamiltonian-path', None, None, 'LCP Hamiltonian file, one term per line'),
        ('delta', None, None, 'Allowed failure probability, in (0, 1)'),
        ('eps-vn', None, None, 'Target precision of the eigenvalue estimate'),
        ('delta-k', None, None, 'Spectral gap; computed from H when omitted'),
        ('shots', None, None, 'Number of sampled pointer measurements'),
        ('seed', None, None, 'Seed of the measurement sampler'),
        ('simulation-mode', None, None, 'qet or exact-oracle'),
        ('initial-state', None, None, 'Eigenstate index or amplitude file'),
        ('kernel-sign', None, None, 'Sign of the Fourier kernel, 1 or -1'),
        ('band', None, None, 'Rotation band of the approximate inverse transform'),
        ('eps-be', None, None, 'Declared block-encoding accuracy'),
        ('max-degree-bumps', None, None, 'Retries when the truncation misses its target'),
    ]


class SimulateOptions(_RunOptions):
    optParameters = [
        ('output-path', 'o', None, 'Results CSV; the summary goes next to it'),
    ]


class EstimateOptions(usage.Options):
    optParameters = [
        ('model', 'm', None, 'Comma-separated cost models: thm3, cor1, cor2'),
        ('beta', None, None, 'Subnormalization of the block-encoding of H (x) p'),
        ('alpha', None, None, 'Sum of the absolute LCP coefficients'),
        ('norm-h', None, None, 'Operator norm of H'),
        ('delta-k', None, None, 'Spectral gap'),
        ('delta', None, None, 'Allowed failure probability'),
        ('eps-be', None, None, 'Block-encoding accuracy'),
        ('eps-vn', None, None, 'Target precision'),
        ('num-terms', None, None, 'Number of Pauli terms'),
        ('qubits', None, None, 'System qubits'),
        ('n-anc', None, None, 'Encoding ancilla qubits'),
        ('output-path', 'o', None, 'Cost CSV; standard output when omitted'),
    ]


class SweepOptions(_RunOptions):
    optParameters = [
        ('axis', None, None, 'One of delta, eps_vN, t, r, eps_BE'),
        ('start', None, None, 'First grid value'),
        ('stop', None, None, 'Last grid value'),
        ('points', None, None, 'Number of grid points'),
        ('spacing', None, None, 'geometric or linear'),
        ('output-path', 'o', None, 'Sweep CSV; standard output when omitted'),
    ]


class Options(usage.Options):
    optFlags = [
        ('verbose', 'v', 'Increase verbosity.'),
    ]

    optParameters = [
        ('config-file', 'f', None, 'The configuration file'),
        ('run-file', 'r', None, 'A flat "key = value" run description'),
        ('log-file', 'l', None, 'The log file'),
    ]

    subCommands = [
        ('simulate', None, SimulateOptions, 'Run the estimation end to end'),
        ('estimate', None, EstimateOptions, 'Evaluate the resource cost models'),
        ('sweep', None, SweepOptions, 'Tabulate parameters and success metrics over a grid'),
    ]

    def postOptions(self) -> None:
        if self.subCommand is None:
            raise usage.UsageError('a command is required: simulate, estimate or sweep')


def _convert_cli_to_config(options: Options) -> dict[str, Any]:
    raw_config: dict[str, Any] = {section: {} for section in _SECTION_SCHEMAS}
    if options['config-file'] is not None:
        raw_config['config_file'] = options['config-file']
    if options['log-file'] is not None:
        raw_config['general']['log_file'] = options['log-file']
    if options['verbose']:
        raw_config['general']['debug'] = True
    sub_options = options.subOptions
    for option_name, (section, param_name) in _OPTION_TO_PARAM_LIST[options.subCommand]:
        if sub_options[option_name] is not None:
            raw_config[section][param_name] = sub_options[option_name]
    return raw_config


def _convert_environment_to_config(environ: Mapping[str, str]) -> dict[str, Any]:
    if SEED_ENVIRONMENT_VARIABLE not in environ:
        return {}
    return {'run': {'seed': environ[SEED_ENVIRONMENT_VARIABLE]}}


def _parse_run_value(raw_value: str) -> Union[str, None]:
    value = raw_value.strip()
    return value or None


def parse_run_file(path: str) -> dict[str, Any]:
    """Read a flat key = value run description into config sections."""
    raw_config: dict[str, Any] = {}
    with open(path) as f:
        for number, line in enumerate(f, start=1):
            content = line.split('#', 1)[0].strip()
            if not content:
                continue
            key, separator, raw_value = content.partition('=')
            key = key.strip()
            if not separator or not key:
                raise ConfigError(f'{path}:{number}: expected "key = value"')
            section, _, param_name = key.rpartition('.')
            section = section or 'run'
            if section not in _SECTION_SCHEMAS:
                raise ConfigError(f'{path}:{number}: unknown section "{section}"')
            raw_config.setdefault(section, {})[param_name] = _parse_run_value(raw_value)
    logger.debug('Read %d sections from run file %s', len(raw_config), path)
    return raw_config


def _validate(raw_config: Mapping[str, Any]) -> VnqpeConfigDict:
    config: dict[str, Any] = {
        'config_file': raw_config['config_file'],
        'extra_config_files': raw_config['extra_config_files'],
    }
    for section, schema in _SECTION_SCHEMAS.items():
        try:
            config[section] = schema(**dict(raw_config[section])).dict()
        except ValidationError as e:
            raise ConfigError(f'invalid "{section}" section: {_first_error(e)}') from e
    return cast(VnqpeConfigDict, config)


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    location = '.'.join(str(part) for part in first['loc'])
    return f'{location}: {first["msg"]}'


def get_config(argv: Options, environ: Mapping[str, str] = os.environ) -> VnqpeConfigDict:
    """Pull the raw parameters values from the configuration sources and
    return a config dictionary.
    """
    cli_config = _convert_cli_to_config(argv)
    file_config = read_config_file_hierarchy(ChainMap(cli_config, _DEFAULT_CONFIG))
    run_file_config = parse_run_file(argv['run-file']) if argv['run-file'] else {}
    env_config = _convert_environment_to_config(environ)
    raw_config = ChainMap(env_config, cli_config, run_file_config, file_config, _DEFAULT_CONFIG)
    return _validate(raw_config)
