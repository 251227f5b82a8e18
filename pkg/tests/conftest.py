"""Shared fixtures: settings isolation and small scenario builders."""

from __future__ import annotations

from typing import Any

import pytest

from config import reset_settings
from scenario.loader import load_preset
from scenario.models import ScenarioConfig


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch: pytest.MonkeyPatch, tmp_path_factory: pytest.TempPathFactory):
    """Fresh settings per test, no progress bars, outputs under a temp dir."""
    monkeypatch.setenv("SHOW_PROGRESS", "false")
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path_factory.mktemp("runs")))
    monkeypatch.delenv("MAX_PARTICLE_STEPS", raising=False)
    reset_settings()
    yield
    reset_settings()


def make_config(
    *,
    scenario: str = "none",
    molecules: int = 200,
    distance: str = "5 um",
    radius: str = "1 um",
    half_extent: str = "20 um",
    dt: str = "50 us",
    duration: str = "20 ms",
    sample: str = "1 ms",
    repetitions: int = 3,
    seed: int = 7,
    **sections: dict[str, Any],
) -> ScenarioConfig:
    """Build a small, valid scenario; extra keyword sections are merged in."""
    data: dict[str, Any] = {
        "name": f"test-{scenario}",
        "environment": {
            "medium_half_extent": half_extent,
            "diffusion_coefficient": 1e-10,
        },
        "geometry": {"distance_d": distance, "receiver_radius_r": radius},
        "transmission": {"molecules_N": molecules},
        "simulation": {
            "timestep_dt": dt,
            "duration": duration,
            "sample_interval": sample,
            "repetitions": repetitions,
            "master_seed": seed,
            "scenario": scenario,
        },
    }
    for section, values in sections.items():
        data.setdefault(section, {}).update(values)
    return ScenarioConfig.model_validate(data)


@pytest.fixture
def desk_none() -> ScenarioConfig:
    return load_preset("desk-none")


@pytest.fixture
def desk_enzyme() -> ScenarioConfig:
    return load_preset("desk-enzyme")


@pytest.fixture
def desk_photolysis() -> ScenarioConfig:
    return load_preset("desk-photolysis")


@pytest.fixture
def table1_none() -> ScenarioConfig:
    return load_preset("paper-table1-1")
