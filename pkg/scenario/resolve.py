"""Resolution of a scenario into strict SI numbers with derived values filled in.

Every downstream module (closed-form models, simulator, detection, CLI)
consumes ``ResolvedScenario`` rather than re-deriving D, T_op, J or E_tot.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from analytics.spectrum import photolysis_rate
from analytics.transport import binding_radius, optimal_light_time
from scenario.models import (
    ContinuityMode,
    EnzymeExponent,
    EnzymeMode,
    Geometry,
    Scenario,
    ScenarioConfig,
    Shell,
)

DEFAULT_SHELL_WEIGHTS = (1.0, 0.75, 0.5, 0.25)


def default_shells(geometry: Geometry) -> tuple[Shell, ...]:
    """Light falloff used when a scenario declares no shells.

    Four shells at outer radii r + k*d (k = 1..4) with weights 1, 0.75, 0.5,
    0.25 and no light beyond the last one.
    """
    r = geometry.receiver_radius_r
    d = geometry.distance_d
    return tuple(
        Shell(outer_radius=r + k * d, weight=w)
        for k, w in enumerate(DEFAULT_SHELL_WEIGHTS, start=1)
    )


@dataclass(frozen=True)
class ResolvedScenario:
    """A validated scenario expressed in SI units with derived quantities."""

    name: str
    scenario: Scenario
    enzyme_mode: EnzymeMode
    continuity_mode: ContinuityMode
    enzyme_exponent: EnzymeExponent

    # Medium and geometry
    temperature: float
    viscosity: float
    diffusion: float
    enzyme_diffusion: float
    half_extent: float
    medium_volume: float
    distance: float
    receiver_radius: float
    receiver_volume: float

    # Transmission
    molecules: int
    symbol_period: float
    p1: float

    # Enzyme kinetics
    enzyme_count: int
    k1: float
    km1: float
    k2: float
    e_tot: float
    binding_radius: float

    # Photolysis
    rate_j: float
    light_time: float
    shell_radii: tuple[float, ...]
    shell_weights: tuple[float, ...]

    # Simulation
    dt: float
    duration: float
    sample_interval: float
    repetitions: int
    master_seed: int

    @property
    def receiver_center(self) -> np.ndarray:
        """Receiver center; the medium is centered between the two endpoints."""
        return np.array([-self.distance / 2.0, 0.0, 0.0])

    @property
    def transmitter_position(self) -> np.ndarray:
        return np.array([self.distance / 2.0, 0.0, 0.0])

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def sample_stride(self) -> int:
        """Simulation steps between two receiver observations."""
        return max(1, int(round(self.sample_interval / self.dt)))

    @property
    def n_samples(self) -> int:
        return self.n_steps // self.sample_stride + 1

    def sample_times(self) -> np.ndarray:
        """Observation grid 0, sample_interval, ..., in seconds."""
        return np.arange(self.n_samples, dtype=float) * self.sample_stride * self.dt

    def decay_rate(self) -> float:
        """First-order binding rate k1 * E_tot of the enzyme lower bound."""
        return self.k1 * self.e_tot

    def particle_steps(self) -> float:
        """Particle-steps needed by one repetition."""
        particles = self.molecules
        if self.scenario is Scenario.ENZYME and self.enzyme_mode is EnzymeMode.MICROSCOPIC:
            particles += self.enzyme_count
        return float(particles) * self.n_steps

    def as_dict(self) -> dict[str, Any]:
        """JSON-ready mapping of every resolved parameter."""
        data = asdict(self)
        for key, value in data.items():
            if hasattr(value, "value"):
                data[key] = value.value
            elif isinstance(value, tuple):
                data[key] = list(value)
        return data


def resolve(config: ScenarioConfig) -> ResolvedScenario:
    """Resolve a validated scenario into SI numbers.

    Derived values: D (Stokes-Einstein when not given), E_tot, the Smoluchowski
    binding radius, J (from the spectrum when not given), T_op (d^2 / 6D when
    not given) and the default shells.

    Args:
        config: A scenario for which ``validate`` returned no violations.

    Returns:
        The resolved scenario.
    """
    env = config.environment
    geom = config.geometry
    kin = config.enzyme
    photo = config.photolysis
    sim = config.simulation

    diffusion = env.diffusion()
    enzyme_diffusion = env.enzyme_diffusion()
    medium_volume = env.medium_volume

    if photo.rate_J is not None:
        rate_j = photo.rate_J
    elif photo.spectrum is not None:
        rate_j = photolysis_rate(photo.spectrum)
    else:
        rate_j = 0.0

    light_time = photo.T_op
    if light_time is None:
        light_time = optimal_light_time(geom.distance_d, diffusion)

    shells = photo.shells if photo.shells is not None else default_shells(geom)

    return ResolvedScenario(
        name=config.name,
        scenario=sim.scenario,
        enzyme_mode=sim.enzyme_mode,
        continuity_mode=photo.continuity_mode,
        enzyme_exponent=kin.exponent_mode,
        temperature=env.temperature_K,
        viscosity=env.viscosity,
        diffusion=diffusion,
        enzyme_diffusion=enzyme_diffusion,
        half_extent=env.medium_half_extent,
        medium_volume=medium_volume,
        distance=geom.distance_d,
        receiver_radius=geom.receiver_radius_r,
        receiver_volume=geom.volume,
        molecules=config.transmission.molecules_N,
        symbol_period=config.transmission.symbol_period_ts,
        p1=config.transmission.a_priori_P1,
        enzyme_count=kin.enzyme_count,
        k1=kin.binding_rate_k1,
        km1=kin.unbinding_rate_km1,
        k2=kin.degradation_rate_k2,
        e_tot=kin.e_tot(medium_volume),
        binding_radius=binding_radius(kin.binding_rate_k1, diffusion, enzyme_diffusion),
        rate_j=rate_j,
        light_time=light_time,
        shell_radii=tuple(s.outer_radius for s in shells),
        shell_weights=tuple(s.weight for s in shells),
        dt=sim.timestep_dt,
        duration=sim.duration,
        sample_interval=sim.sample_interval,
        repetitions=sim.repetitions,
        master_seed=sim.master_seed,
    )


def first_order_probability(rate: float, dt: float) -> float:
    """Probability 1 - exp(-rate * dt) that a first-order event fires in one step."""
    return -math.expm1(-rate * dt)
