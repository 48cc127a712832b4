# Copyright 2024 The vnqpe-lab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from __future__ import annotations

import math
from typing import Any, Callable, TypedDict, cast

from pydantic import BaseModel

CEIL_TOLERANCE = 1e-9


def ceil_tolerant(value: float, tolerance: float = CEIL_TOLERANCE) -> int:
    """Ceiling that ignores floating point noise just above an integer.

    >>> ceil_tolerant(3 / (2 * 0.25))
    6
    >>> ceil_tolerant(6.000000000001)
    6
    >>> ceil_tolerant(6.1)
    7
    """
    return math.ceil(value - tolerance)


def clamped_log(value: float, base: float = math.e) -> tuple[float, bool]:
    """Return max(log(value), 0) and whether the clamp fired.

    >>> clamped_log(math.e)
    (1.0, False)
    >>> clamped_log(0.5, 2)
    (0.0, True)
    """
    if value <= 0:
        return 0.0, True
    result = math.log(value, base) if base != math.e else math.log(value)
    if result < 0:
        return 0.0, True
    return result, False


def format_float(value: float) -> str:
    """Render a float with enough digits to round trip.

    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(2.0)
    '2'
    """
    return format(value, '.17g')


def create_model_from_typeddict(
    typed_dict: type[TypedDict],  # type: ignore[valid-type]
    field_options: dict[str, Any] | None = None,
    validators: dict[str, Callable[..., Any]] | None = None,
    config: type | None = None,
) -> type[BaseModel]:
    """Build the validating model of one configuration section.

    Each section (general, run, simulation, estimate, sweep) is declared once
    as a TypedDict; the model named `<Section>Schema` checks the merged values
    of that section. Every key is required: a field only accepts None when its
    annotation allows it, and only has a default when field_options gives one.
    The TypedDict module must not use lazy annotations.
    """
    schema_name = typed_dict.__name__.removesuffix('ConfigDict') + 'Schema'
    field_options = field_options or {}
    attrs: dict[str, Any] = {'__annotations__': dict(typed_dict.__annotations__)}
    for field_name in attrs['__annotations__']:
        attrs[field_name] = field_options.get(field_name, ...)
    if config:
        attrs['Config'] = config
    if validators:
        attrs |= validators
    return cast(type[BaseModel], type(schema_name, (BaseModel,), attrs))


if __name__ == '__main__':
    import doctest

    doctest.testmod(verbose=True)
