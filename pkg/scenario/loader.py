"""Load scenario configurations from TOML files and shipped presets.

Schema (all sections are tables; quantities accept "<value> <unit>" strings):

    name = "desk-none"
    notes = ["free text caveats"]

    [environment]       temperature_K, viscosity, medium_half_extent,
                        diffusion_coefficient | molecule_radius,
                        enzyme_diffusion_coefficient
    [geometry]          distance_d, receiver_radius_r, receiver_volume_V
    [enzyme]            enzyme_count, binding_rate_k1, unbinding_rate_km1,
                        degradation_rate_k2, exponent_mode
    [photolysis]        rate_J | spectrum_file | [photolysis.spectrum], T_op,
                        continuity_mode, [[photolysis.shells]]
    [transmission]      molecules_N, symbol_period_ts, a_priori_P1
    [simulation]        timestep_dt, duration, sample_interval, repetitions,
                        master_seed, scenario, enzyme_mode

See docs/CONFIG_SCHEMA.md for the full reference.
"""

from __future__ import annotations

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from analytics.spectrum import load_spectrum_csv
from config import get_settings
from errors import ConfigParseError
from scenario.models import ScenarioConfig

logger = logging.getLogger(__name__)

_TOML_LINE_RE = re.compile(r"line (\d+)")

# Descriptive names for the published parameter sets
PRESET_ALIASES: dict[str, str] = {
    "reference-none": "paper-table1-1",
    "reference-enzyme": "paper-table1-2",
    "reference-photolysis": "paper-table1-3",
}


def _locate(text: str, loc: tuple[int | str, ...]) -> int | None:
    """Best-effort line number of the key addressed by a pydantic error location."""
    keys = [part for part in loc if isinstance(part, str)]
    if not keys:
        return None
    lines = text.splitlines()
    section = keys[0]
    start = 0
    header = re.compile(rf"^\s*\[\[?\s*{re.escape(section)}(\.[\w.]+)?\s*\]\]?")
    for i, line in enumerate(lines):
        if header.match(line):
            start = i
            break
    # Array-of-tables entries, e.g. ("photolysis", "shells", 2, "weight")
    for pos, part in enumerate(loc[:-1]):
        if isinstance(part, int) and pos > 0 and isinstance(loc[pos - 1], str):
            table = re.escape(".".join(str(p) for p in loc[:pos]))
            entries = [
                i for i, line in enumerate(lines) if re.match(rf"^\s*\[\[\s*{table}\s*\]\]", line)
            ]
            if part < len(entries):
                start = entries[part]
    key = re.compile(rf"^\s*{re.escape(keys[-1])}\s*=")
    for i in range(start, len(lines)):
        if key.match(lines[i]):
            return i + 1
    return start + 1 if start else None


def parse_config(
    text: str, *, source: str = "<string>", base_dir: Path | None = None
) -> ScenarioConfig:
    """Parse scenario TOML text.

    Args:
        text: TOML document.
        source: Name used in log messages.
        base_dir: Directory against which ``photolysis.spectrum_file`` is resolved.

    Returns:
        The parsed (not yet validated) scenario.

    Raises:
        ConfigParseError: On TOML syntax errors, type errors, unknown units or keys.
    """
    try:
        data: dict[str, Any] = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _TOML_LINE_RE.search(str(exc))
        raise ConfigParseError(str(exc), line=int(match.group(1)) if match else None) from exc

    photolysis = data.get("photolysis")
    if isinstance(photolysis, dict) and "spectrum_file" in photolysis:
        spectrum_path = Path(photolysis.pop("spectrum_file"))
        if not spectrum_path.is_absolute() and base_dir is not None:
            spectrum_path = base_dir / spectrum_path
        zenith = float(photolysis.pop("zenith_angle_theta", 0.0))
        try:
            photolysis["spectrum"] = load_spectrum_csv(spectrum_path, zenith_angle=zenith)
        except (OSError, ValueError) as exc:
            raise ConfigParseError(
                str(exc),
                line=_locate(text, ("photolysis", "spectrum_file")),
                field="photolysis.spectrum_file",
            ) from exc

    try:
        config = ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = tuple(first["loc"])
        field = ".".join(str(part) for part in loc)
        raise ConfigParseError(
            f"{first['msg']} ({exc.error_count()} error(s) in {source})",
            line=_locate(text, loc),
            field=field,
        ) from exc

    for note in config.notes:
        logger.warning("%s: %s", config.name, note)
    logger.info("Loaded scenario '%s' from %s", config.name, source)
    return config


def load_config(path: Path) -> ScenarioConfig:
    """Load a scenario TOML file.

    Raises:
        FileNotFoundError: If the file doesn't exist.
        ConfigParseError: If the file cannot be parsed.
    """
    if not path.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), source=str(path), base_dir=path.parent)


def list_presets() -> list[str]:
    """Names of the shipped presets."""
    return sorted(p.stem for p in get_settings().presets_dir.glob("*.toml"))


def load_preset(name: str) -> ScenarioConfig:
    """Load a shipped preset by name (e.g. "desk-none", "paper-table1-2").

    The names in ``PRESET_ALIASES`` are accepted as well.

    Raises:
        FileNotFoundError: If no preset with that name exists.
    """
    path = get_settings().presets_dir / f"{PRESET_ALIASES.get(name, name)}.toml"
    if not path.exists():
        raise FileNotFoundError(
            f"Unknown preset '{name}'. Available: {', '.join(list_presets())}"
        )
    return load_config(path)
