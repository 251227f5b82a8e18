"""Invariant checks for scenario configurations.

``validate`` never raises: every violation is returned as data so the CLI can
report all of them at once. A scenario that validates clean is accepted by
every downstream operation without precondition errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scenario.models import EnzymeMode, Scenario, ScenarioConfig
from scenario.resolve import default_shells, first_order_probability

MAX_SEED = 2**64
# Upper bound on a single-step first-order reaction probability
MAX_STEP_PROBABILITY = 0.1
# Per-axis step standard deviation allowed relative to the medium half extent
MAX_STEP_FRACTION = 0.1
VOLUME_RTOL = 1e-12
GRID_RTOL = 1e-9
SPECTRUM_FIELDS = ("wavelength_nm", "quantum_yield_phi", "cross_section_sigma", "actinic_flux_F")


@dataclass(frozen=True)
class Violation:
    """One broken invariant.

    Attributes:
        path: Dotted field path (e.g. "simulation.timestep_dt").
        message: Human-readable description.
    """

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _is_multiple(value: float, step: float) -> bool:
    ratio = value / step
    return abs(ratio - round(ratio)) <= GRID_RTOL * max(1.0, abs(ratio))


def _check_environment(config: ScenarioConfig, out: list[Violation]) -> float | None:
    env = config.environment
    if not env.temperature_K > 0:
        out.append(Violation("environment.temperature_K", "temperature must be > 0"))
    if not env.viscosity > 0:
        out.append(Violation("environment.viscosity", "viscosity must be > 0"))
    if not env.medium_half_extent > 0:
        out.append(Violation("environment.medium_half_extent", "medium half extent must be > 0"))
    if env.molecule_radius is not None and not env.molecule_radius > 0:
        out.append(Violation("environment.molecule_radius", "molecule radius must be > 0"))
    if env.enzyme_diffusion_coefficient is not None and env.enzyme_diffusion_coefficient < 0:
        out.append(
            Violation("environment.enzyme_diffusion_coefficient", "enzyme diffusivity must be >= 0")
        )

    if env.diffusion_coefficient is not None:
        if not env.diffusion_coefficient > 0:
            out.append(
                Violation("environment.diffusion_coefficient", "diffusion coefficient must be > 0")
            )
            return None
        return env.diffusion_coefficient
    if env.molecule_radius is None:
        out.append(
            Violation(
                "environment.diffusion_coefficient",
                "give diffusion_coefficient or molecule_radius",
            )
        )
        return None
    if env.molecule_radius > 0 and env.temperature_K > 0 and env.viscosity > 0:
        return env.diffusion()
    return None


def _check_geometry(config: ScenarioConfig, out: list[Violation]) -> None:
    geom = config.geometry
    env = config.environment
    if not geom.distance_d > 0:
        out.append(Violation("geometry.distance_d", "distance must be > 0"))
    if not geom.receiver_radius_r > 0:
        out.append(Violation("geometry.receiver_radius_r", "receiver radius must be > 0"))
    if geom.receiver_volume_V is not None and geom.receiver_radius_r > 0:
        if not math.isclose(geom.receiver_volume_V, geom.volume, rel_tol=VOLUME_RTOL):
            out.append(
                Violation(
                    "geometry.receiver_volume_V",
                    f"volume {geom.receiver_volume_V:.9g} inconsistent with radius "
                    f"(expected {geom.volume:.9g})",
                )
            )
    reach = geom.distance_d + geom.receiver_radius_r
    if env.medium_half_extent > 0 and not env.medium_half_extent > reach:
        out.append(
            Violation(
                "environment.medium_half_extent",
                f"medium half extent must exceed distance + receiver radius ({reach:.9g} m)",
            )
        )


def _check_enzyme(config: ScenarioConfig, out: list[Violation]) -> None:
    kin = config.enzyme
    if kin.enzyme_count < 0:
        out.append(Violation("enzyme.enzyme_count", "enzyme count must be >= 0"))
    for name in ("binding_rate_k1", "unbinding_rate_km1", "degradation_rate_k2"):
        if getattr(kin, name) < 0:
            out.append(Violation(f"enzyme.{name}", "rate must be >= 0"))


def _check_enzyme_steps(config: ScenarioConfig, out: list[Violation]) -> None:
    """Per-step reaction probabilities must stay small when enzymes are simulated."""
    kin = config.enzyme
    dt = config.simulation.timestep_dt
    if not dt > 0 or config.environment.medium_half_extent <= 0:
        return
    rates = {
        "enzyme.unbinding_rate_km1": kin.unbinding_rate_km1,
        "enzyme.degradation_rate_k2": kin.degradation_rate_k2,
    }
    if config.simulation.enzyme_mode is EnzymeMode.WELL_MIXED:
        e_tot = kin.e_tot(config.environment.medium_volume)
        rates["enzyme.binding_rate_k1"] = kin.binding_rate_k1 * e_tot
    for path, rate in rates.items():
        if rate >= 0 and first_order_probability(rate, dt) >= MAX_STEP_PROBABILITY:
            out.append(
                Violation(
                    path,
                    f"per-step reaction probability 1 - exp(-k dt) must be < "
                    f"{MAX_STEP_PROBABILITY} (reduce timestep_dt)",
                )
            )
    if config.simulation.enzyme_mode is EnzymeMode.MICROSCOPIC and kin.enzyme_count == 0:
        out.append(Violation("enzyme.enzyme_count", "microscopic mode needs at least one enzyme"))


def _check_photolysis(config: ScenarioConfig, out: list[Violation]) -> None:
    photo = config.photolysis
    if photo.rate_J is not None and photo.rate_J < 0:
        out.append(Violation("photolysis.rate_J", "rate J must be >= 0"))
    if photo.T_op is not None and not photo.T_op > 0:
        out.append(Violation("photolysis.T_op", "T_op must be > 0"))
    if config.scenario is Scenario.PHOTOLYSIS and photo.rate_J is None and photo.spectrum is None:
        out.append(Violation("photolysis.rate_J", "give rate_J or a spectrum table"))

    if photo.spectrum is not None:
        rows = photo.spectrum.rows
        if not rows:
            out.append(Violation("photolysis.spectrum.rows", "spectrum needs at least one row"))
        for i, row in enumerate(rows):
            for name in SPECTRUM_FIELDS:
                if getattr(row, name) < 0:
                    out.append(
                        Violation(f"photolysis.spectrum.rows[{i}].{name}", "value must be >= 0")
                    )
            if i > 0 and not row.wavelength_nm > rows[i - 1].wavelength_nm:
                out.append(
                    Violation(
                        f"photolysis.spectrum.rows[{i}].wavelength_nm",
                        "wavelengths must be strictly increasing",
                    )
                )

    shells = photo.shells
    if shells is None:
        if config.geometry.distance_d > 0 and config.geometry.receiver_radius_r > 0:
            shells = default_shells(config.geometry)
        else:
            return
    if not shells:
        out.append(Violation("photolysis.shells", "at least one shell is required"))
        return
    if not math.isclose(shells[0].weight, 1.0):
        out.append(Violation("photolysis.shells[0].weight", "first weight must be 1"))
    for i, shell in enumerate(shells):
        if not shell.outer_radius > 0:
            out.append(Violation(f"photolysis.shells[{i}].outer_radius", "radius must be > 0"))
        if not 0.0 <= shell.weight <= 1.0:
            out.append(Violation(f"photolysis.shells[{i}].weight", "weight must lie in [0, 1]"))
        if i == 0:
            continue
        if not shell.outer_radius > shells[i - 1].outer_radius:
            out.append(
                Violation(
                    f"photolysis.shells[{i}].outer_radius",
                    "shell radii must be strictly increasing",
                )
            )
        if shell.weight > shells[i - 1].weight:
            out.append(
                Violation(f"photolysis.shells[{i}].weight", "weights must be non-increasing")
            )


def _check_transmission(config: ScenarioConfig, out: list[Violation]) -> None:
    tx = config.transmission
    if tx.molecules_N < 0:
        out.append(Violation("transmission.molecules_N", "molecule count must be >= 0"))
    if not tx.symbol_period_ts > 0:
        out.append(Violation("transmission.symbol_period_ts", "symbol period must be > 0"))
    if not 0.0 <= tx.a_priori_P1 <= 1.0:
        out.append(Violation("transmission.a_priori_P1", "P1 must lie in [0, 1]"))


def _check_simulation(
    config: ScenarioConfig, diffusion: float | None, out: list[Violation]
) -> None:
    sim = config.simulation
    dt = sim.timestep_dt
    if not dt > 0:
        out.append(Violation("simulation.timestep_dt", "timestep must be > 0"))
    elif not dt <= sim.sample_interval:
        out.append(Violation("simulation.sample_interval", "sample interval must be >= timestep"))
    elif not _is_multiple(sim.sample_interval, dt):
        out.append(
            Violation(
                "simulation.sample_interval", "sample interval must be a multiple of timestep"
            )
        )
    if not sim.sample_interval <= sim.duration:
        out.append(Violation("simulation.duration", "duration must be >= sample interval"))
    if sim.repetitions < 1:
        out.append(Violation("simulation.repetitions", "repetitions must be >= 1"))
    if not 0 <= sim.master_seed < MAX_SEED:
        out.append(Violation("simulation.master_seed", "seed must be a 64-bit unsigned integer"))

    half_extent = config.environment.medium_half_extent
    if diffusion is not None and dt > 0 and half_extent > 0:
        sigma = math.sqrt(2.0 * diffusion * dt)
        if sigma > MAX_STEP_FRACTION * half_extent:
            out.append(
                Violation(
                    "simulation.timestep_dt",
                    f"per-step displacement {sigma:.3g} m is not small against the medium",
                )
            )


def validate(config: ScenarioConfig) -> list[Violation]:
    """Collect every invariant violation of a scenario.

    Args:
        config: Parsed scenario.

    Returns:
        Violations in a deterministic order; an empty list means valid.
    """
    violations: list[Violation] = []
    diffusion = _check_environment(config, violations)
    _check_geometry(config, violations)
    _check_enzyme(config, violations)
    _check_photolysis(config, violations)
    _check_transmission(config, violations)
    _check_simulation(config, diffusion, violations)
    if config.scenario is Scenario.ENZYME:
        _check_enzyme_steps(config, violations)
    return violations
