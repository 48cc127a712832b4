# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

from pathlib import Path

import pytest
from hamcrest import assert_that, calling, equal_to, has_entries, none, raises
from pydantic import ValidationError
from twisted.python import usage

from ..config import ConfigError, Options, get_config, parse_run_file
from ..schemas import EstimateSchema, RunConfigSchema, SweepSchema

RUN_DEFAULTS = {
    'hamiltonian_path': None,
    'delta': 0.25,
    'eps_vN': 0.05,
    'delta_k': None,
    'shots': 10,
    'seed': None,
    'simulation_mode': 'qet',
    'initial_state': 0,
    'output_path': 'out.csv',
    'kernel_sign': 1,
    'band': None,
    'eps_be': 0.0,
}


def _options(tmp_path: Path, *argv: str) -> Options:
    options = Options()
    options.parseOptions(['-f', str(tmp_path / 'config.yml'), *argv])
    return options


def test_defaults(tmp_path: Path) -> None:
    config = get_config(_options(tmp_path, 'estimate'), {})

    assert_that(config['estimate'], has_entries(models='thm3,cor1,cor2', n_anc=6))
    assert_that(config['run'], has_entries(delta=0.25, simulation_mode='qet', seed=none()))
    assert_that(config['general']['debug'], equal_to(False))


def test_file_is_merged_over_defaults(tmp_path: Path) -> None:
    (tmp_path / 'config.yml').write_text('run:\n  delta: 0.1\n')

    config = get_config(_options(tmp_path, 'simulate'), {})

    assert_that(config['run'], has_entries(delta=0.1, eps_vN=0.05))


def test_precedence(tmp_path: Path) -> None:
    (tmp_path / 'config.yml').write_text('run:\n  delta: 0.1\n  shots: 5\n  seed: 1\n')
    run_file = tmp_path / 'run.txt'
    run_file.write_text('# example\ndelta = 0.2\nshots = 6\nseed = 2\nsweep.points = 7\n')
    options = _options(
        tmp_path, '-v', '-r', str(run_file), 'sweep', '--shots', '8', '--seed', '3'
    )

    config = get_config(options, {'VNQPE_SEED': '4'})

    assert_that(config['run'], has_entries(delta=0.2, shots=8, seed=4))
    assert_that(config['sweep']['points'], equal_to(7))
    assert_that(config['general']['debug'], equal_to(True))


def test_cli_values_are_converted(tmp_path: Path) -> None:
    options = _options(
        tmp_path, 'simulate', '--eps-vn', '0.125', '--initial-state', '3', '--band', '2'
    )

    config = get_config(options, {})

    assert_that(config['run'], has_entries(eps_vN=0.125, initial_state=3, band=2))


def test_amplitude_file_state(tmp_path: Path) -> None:
    options = _options(tmp_path, 'simulate', '--initial-state', 'states/psi.txt')

    config = get_config(options, {})

    assert_that(config['run']['initial_state'], equal_to('states/psi.txt'))


def test_invalid_value(tmp_path: Path) -> None:
    options = _options(tmp_path, 'simulate', '--delta', '1.5')

    assert_that(calling(get_config).with_args(options, {}), raises(ConfigError, 'run'))


def test_unknown_file_key(tmp_path: Path) -> None:
    (tmp_path / 'config.yml').write_text('run:\n  delat: 0.1\n')

    assert_that(
        calling(get_config).with_args(_options(tmp_path, 'simulate'), {}),
        raises(ConfigError),
    )


def test_unknown_model(tmp_path: Path) -> None:
    options = _options(tmp_path, 'estimate', '--model', 'thm3,thm4')

    assert_that(calling(get_config).with_args(options, {}), raises(ConfigError, 'estimate'))


def test_missing_command() -> None:
    assert_that(calling(Options().parseOptions).with_args([]), raises(usage.UsageError))


def test_unknown_option() -> None:
    assert_that(
        calling(Options().parseOptions).with_args(['simulate', '--no-such-flag']),
        raises(usage.UsageError),
    )


class TestRunFile:
    def test_sections_and_empty_values(self, tmp_path: Path) -> None:
        path = tmp_path / 'run.txt'
        path.write_text('delta_k =\nestimate.beta = 2  # inline\n\n')

        raw = parse_run_file(str(path))

        assert_that(raw, equal_to({'run': {'delta_k': None}, 'estimate': {'beta': '2'}}))

    def test_missing_separator(self, tmp_path: Path) -> None:
        path = tmp_path / 'run.txt'
        path.write_text('delta 0.2\n')

        assert_that(calling(parse_run_file).with_args(str(path)), raises(ConfigError, ':1:'))

    def test_unknown_section(self, tmp_path: Path) -> None:
        path = tmp_path / 'run.txt'
        path.write_text('plot.color = red\n')

        assert_that(calling(parse_run_file).with_args(str(path)), raises(ConfigError))

    @pytest.mark.parametrize('key', ['simulation_mode', 'output_path', 'initial_state'])
    def test_empty_value_for_required_key(self, tmp_path: Path, key: str) -> None:
        run_file = tmp_path / 'run.txt'
        run_file.write_text(f'{key} =\n')
        options = _options(tmp_path, '-r', str(run_file), 'simulate')

        assert_that(calling(get_config).with_args(options, {}), raises(ConfigError, key))


class TestSchemas:
    def test_valid_run(self) -> None:
        run = RunConfigSchema(**RUN_DEFAULTS)

        assert_that(run.dict(), has_entries(delta=0.25, initial_state=0))

    @pytest.mark.parametrize(
        'changes',
        [
            {'kernel_sign': 2},
            {'initial_state': -1},
            {'delta_k': 0.01},
            {'delta': 0.0},
            {'simulation_mode': 'exact'},
            {'simulation_mode': None},
            {'output_path': None},
            {'kernel_sign': None},
        ],
    )
    def test_invalid_run(self, changes: dict) -> None:
        with pytest.raises(ValidationError):
            RunConfigSchema(**{**RUN_DEFAULTS, **changes})

    def test_every_key_is_required(self) -> None:
        values = dict(RUN_DEFAULTS)
        del values['seed']

        with pytest.raises(ValidationError):
            RunConfigSchema(**values)

    def test_unknown_model(self) -> None:
        values = {
            'models': 'cor2,cor3',
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
        }

        with pytest.raises(ValidationError):
            EstimateSchema(**values)

    def test_geometric_grid_needs_positive_ends(self) -> None:
        values = {
            'axis': 'delta',
            'start': 0.0,
            'stop': 0.5,
            'points': 4,
            'spacing': 'geometric',
            'output_path': None,
        }

        with pytest.raises(ValidationError):
            SweepSchema(**values)

        assert_that(SweepSchema(**{**values, 'spacing': 'linear'}).start, equal_to(0.0))
