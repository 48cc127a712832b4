"""
Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
SPDX-License-Identifier: GPL-3.0-or-later

**NOTE**: `annotations` are not intentionally imported from __future__.
This is to avoid lazy evaluation of annotations in this file and simplify the logic
of the `create_model_from_typeddict`.
"""
from typing import Any, Literal, TypedDict, Union

from pydantic import BaseModel, Field, root_validator

from .util import create_model_from_typeddict

ESTIMATE_MODELS = ('thm3', 'cor1', 'cor2')
SWEEP_AXES = ('delta', 'eps_vN', 't', 'r', 'eps_BE')


class SchemaConfig:
    extra = 'forbid'


class GeneralConfigDict(TypedDict):
    log_file: str
    debug: bool


class RunConfigDict(TypedDict):
    hamiltonian_path: Union[str, None]
    delta: float
    eps_vN: float
    delta_k: Union[float, None]
    shots: int
    seed: Union[int, None]
    simulation_mode: Literal['qet', 'exact-oracle']
    initial_state: Union[int, str]
    output_path: str
    kernel_sign: int
    band: Union[int, None]
    eps_be: float


class SimulationConfigDict(TypedDict):
    max_degree_bumps: int


class EstimateConfigDict(TypedDict):
    models: str
    beta: float
    alpha: float
    norm_h: float
    delta_k: float
    delta: float
    eps_be: float
    eps_vN: float
    num_terms: int
    n: int
    n_anc: int
    output_path: Union[str, None]


class SweepConfigDict(TypedDict):
    axis: Literal['delta', 'eps_vN', 't', 'r', 'eps_BE']
    start: float
    stop: float
    points: int
    spacing: Literal['geometric', 'linear']
    output_path: Union[str, None]


GeneralSchema = create_model_from_typeddict(GeneralConfigDict, config=SchemaConfig)


@root_validator(allow_reuse=True)
def validate_run(cls: type[BaseModel], values: dict[str, Any]) -> dict[str, Any]:
    if values.get('kernel_sign') not in (1, -1):
        raise ValueError('kernel_sign must be 1 or -1')
    initial_state = values.get('initial_state')
    if isinstance(initial_state, int) and initial_state < 0:
        raise ValueError('initial_state index must be nonnegative')
    delta_k, eps_vN = values.get('delta_k'), values.get('eps_vN')
    if delta_k is not None and eps_vN is not None and eps_vN > delta_k:
        raise ValueError(f'eps_vN {eps_vN} is coarser than the gap {delta_k}')
    return values


RunConfigSchema = create_model_from_typeddict(
    RunConfigDict,
    {
        'delta': Field(gt=0, lt=1),
        'eps_vN': Field(gt=0),
        'delta_k': Field(None, gt=0),
        'shots': Field(ge=0),
        'band': Field(None, ge=1),
        'eps_be': Field(0.0, ge=0),
    },
    {'validate_run': validate_run},
    config=SchemaConfig,
)

SimulationSchema = create_model_from_typeddict(
    SimulationConfigDict,
    {'max_degree_bumps': Field(ge=0)},
    config=SchemaConfig,
)


@root_validator(allow_reuse=True)
def validate_models(cls: type[BaseModel], values: dict[str, Any]) -> dict[str, Any]:
    models = [model.strip() for model in (values.get('models') or '').split(',')]
    unknown = [model for model in models if model not in ESTIMATE_MODELS]
    if unknown:
        raise ValueError(f'unknown models {unknown}, expected some of {ESTIMATE_MODELS}')
    return values


EstimateSchema = create_model_from_typeddict(
    EstimateConfigDict,
    {
        'beta': Field(gt=0),
        'alpha': Field(gt=0),
        'norm_h': Field(gt=0),
        'delta_k': Field(gt=0),
        'delta': Field(gt=0, lt=1),
        'eps_be': Field(gt=0, le=1),
        'eps_vN': Field(gt=0),
        'num_terms': Field(ge=1),
        'n': Field(ge=1),
        'n_anc': Field(ge=0),
    },
    {'validate_models': validate_models},
    config=SchemaConfig,
)


@root_validator(allow_reuse=True)
def validate_grid(cls: type[BaseModel], values: dict[str, Any]) -> dict[str, Any]:
    if values.get('spacing') == 'geometric':
        if values.get('start', 1) <= 0 or values.get('stop', 1) <= 0:
            raise ValueError('a geometric grid needs positive end points')
    return values


SweepSchema = create_model_from_typeddict(
    SweepConfigDict,
    {'points': Field(ge=0)},
    {'validate_grid': validate_grid},
    config=SchemaConfig,
)
