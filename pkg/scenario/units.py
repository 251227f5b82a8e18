"""Declared unit set and quantity parsing.

Scenario files may state a quantity either as a bare number (already strict SI)
or as a string such as ``"5 um"`` or ``"0.2 us"``. Only the units listed here
are accepted; there is no unit inference.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from typing import Annotated, Literal

from pydantic import BeforeValidator
from scipy import constants

QuantityKind = Literal[
    "length",
    "time",
    "rate",
    "diffusivity",
    "viscosity",
    "bimolecular_rate",
    "temperature",
    "wavelength",
    "volume",
]

# Conversion factors to strict SI for every declared unit
UNITS: dict[QuantityKind, dict[str, float]] = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
    "rate": {"1/s": 1.0, "1/ms": 1e3, "1/us": 1e6, "1/ns": 1e9},
    "diffusivity": {"m2/s": 1.0, "um2/s": 1e-12},
    "viscosity": {"Pa*s": 1.0, "mPa*s": 1e-3, "kg/(m*s)": 1.0},
    "bimolecular_rate": {
        "m3/s": 1.0,
        "um3/s": 1e-18,
        "nm3/s": 1e-27,
        "nm3/ns": 1e-18,
        # Molar units: 1 L mol^-1 s^-1 per molecule pair
        "1/(M*s)": 1e-3 / constants.Avogadro,
    },
    "temperature": {"K": 1.0},
    "wavelength": {"nm": 1.0},
    "volume": {"m3": 1.0, "um3": 1e-18},
}

# Kinds whose unit symbols match regardless of case
_CASE_INSENSITIVE: frozenset[QuantityKind] = frozenset({"temperature", "viscosity"})

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def _normalize_unit(unit: str) -> str:
    unit = unit.replace("µ", "u").replace("μ", "u").replace("·", "*")
    unit = unit.replace("⁻¹", "^-1").replace(" ", "")
    # "s^-1" style rates
    if unit.endswith("^-1") and unit.count("^-1") == 1:
        unit = f"1/{unit[:-3]}"
    return unit.replace("^", "")


def parse_quantity(value: object, kind: QuantityKind) -> float:
    """Convert a scenario-file value to a float in strict SI units.

    Args:
        value: A number (taken as SI) or a "<number> <unit>" string.
        kind: Which quantity family the unit must belong to.

    Returns:
        The value in SI units.

    Raises:
        ValueError: If the string is malformed or the unit is not declared.
    """
    if isinstance(value, bool):
        raise ValueError(f"expected a {kind} quantity, got a boolean")
    if isinstance(value, int | float):
        return float(value)
    if not isinstance(value, str):
        raise ValueError(f"expected a {kind} quantity, got {type(value).__name__}")

    match = _QUANTITY_RE.match(value)
    if match is None:
        raise ValueError(f"malformed quantity '{value}'")
    number, unit = match.groups()
    if not unit:
        return float(number)

    factors = UNITS[kind]
    key = _normalize_unit(unit)
    if key not in factors and kind in _CASE_INSENSITIVE:
        key = next((k for k in factors if k.lower() == key.lower()), key)
    if key not in factors:
        allowed = ", ".join(sorted(factors))
        raise ValueError(f"unit '{unit}' is not a declared {kind} unit (allowed: {allowed})")
    return float(number) * factors[key]


def _validator(kind: QuantityKind) -> Callable[[object], object]:
    def convert(value: object) -> object:
        if value is None:
            return None
        return parse_quantity(value, kind)

    return convert


Length = Annotated[float, BeforeValidator(_validator("length"))]
Time = Annotated[float, BeforeValidator(_validator("time"))]
Rate = Annotated[float, BeforeValidator(_validator("rate"))]
Diffusivity = Annotated[float, BeforeValidator(_validator("diffusivity"))]
Viscosity = Annotated[float, BeforeValidator(_validator("viscosity"))]
BimolecularRate = Annotated[float, BeforeValidator(_validator("bimolecular_rate"))]
Temperature = Annotated[float, BeforeValidator(_validator("temperature"))]
Wavelength = Annotated[float, BeforeValidator(_validator("wavelength"))]
Volume = Annotated[float, BeforeValidator(_validator("volume"))]

OptionalLength = Annotated[float | None, BeforeValidator(_validator("length"))]
OptionalTime = Annotated[float | None, BeforeValidator(_validator("time"))]
OptionalRate = Annotated[float | None, BeforeValidator(_validator("rate"))]
OptionalDiffusivity = Annotated[float | None, BeforeValidator(_validator("diffusivity"))]
OptionalVolume = Annotated[float | None, BeforeValidator(_validator("volume"))]
