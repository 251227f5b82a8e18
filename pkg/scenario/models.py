"""Domain types describing one molecular-communication experiment.

All models are frozen pydantic models: they are immutable after construction
and safe to share across worker processes. Type-level problems (wrong type,
unknown unit, unknown key) are rejected at parse time; physical invariants are
reported as data by ``scenario.validation.validate``.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from analytics import transport
from errors import DomainError
from scenario.units import (
    BimolecularRate,
    Length,
    OptionalDiffusivity,
    OptionalLength,
    OptionalRate,
    OptionalTime,
    OptionalVolume,
    Rate,
    Temperature,
    Time,
    Viscosity,
    Wavelength,
)


class Scenario(str, Enum):
    """Channel treatment applied to the information molecules."""

    NONE = "none"  # Free diffusion only
    ENZYME = "enzyme"  # Michaelis-Menten degradation by enzymes in the medium
    PHOTOLYSIS = "photolysis"  # Light-triggered first-order decay after T_op


class EnzymeMode(str, Enum):
    """How enzyme binding is resolved by the particle simulator."""

    MICROSCOPIC = "microscopic"  # Explicit enzymes, Smoluchowski binding radius
    WELL_MIXED = "well-mixed"  # Uniform E_tot, first-order binding probability


class ContinuityMode(str, Enum):
    """Decay factor used by the photolysis lower bound for t >= T_op."""

    AS_WRITTEN = "as-written"  # exp(-J t)
    SHIFTED = "shifted"  # exp(-J (t - T_op)), continuous at T_op


class EnzymeExponent(str, Enum):
    """Exponent of the enzyme lower bound."""

    CORRECTED = "corrected"  # exp(-k1 E_tot t)
    AS_PRINTED = "as-printed"  # exp(-k1 E_tot), dimensionally inconsistent


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", use_enum_values=False)


class Environment(_Frozen):
    """Medium properties. The medium is a cube centered between transmitter and receiver."""

    temperature_K: Temperature = 298.15
    viscosity: Viscosity = 1e-3
    medium_half_extent: Length
    diffusion_coefficient: OptionalDiffusivity = None
    molecule_radius: OptionalLength = None
    # Enzymes (and enzyme-substrate complexes) default to the molecule diffusivity
    enzyme_diffusion_coefficient: OptionalDiffusivity = None

    def diffusion(self) -> float:
        """Diffusion coefficient of information molecules in m^2/s.

        Uses the declared value, otherwise Stokes-Einstein from molecule_radius.

        Raises:
            DomainError: If neither the coefficient nor the radius is available.
        """
        if self.diffusion_coefficient is not None:
            return self.diffusion_coefficient
        if self.molecule_radius is None:
            raise DomainError(
                "environment.diffusion_coefficient",
                "give diffusion_coefficient or molecule_radius",
            )
        return transport.diffusion_coefficient(
            self.temperature_K, self.viscosity, self.molecule_radius
        )

    def enzyme_diffusion(self) -> float:
        """Diffusion coefficient of enzymes and complexes in m^2/s."""
        if self.enzyme_diffusion_coefficient is not None:
            return self.enzyme_diffusion_coefficient
        return self.diffusion()

    @property
    def medium_volume(self) -> float:
        """Volume of the bounded cubic medium in m^3."""
        return (2.0 * self.medium_half_extent) ** 3


class Geometry(_Frozen):
    """Point transmitter and passive spherical receiver."""

    distance_d: Length
    receiver_radius_r: Length
    # Optional declared volume, checked against the radius
    receiver_volume_V: OptionalVolume = None

    @property
    def volume(self) -> float:
        """Receiver volume (4/3) * pi * r^3 in m^3."""
        return 4.0 / 3.0 * math.pi * self.receiver_radius_r**3


class EnzymeKinetics(_Frozen):
    """Michaelis-Menten rates E + S <-> M_c -> E + P."""

    enzyme_count: int = 0
    binding_rate_k1: BimolecularRate = 0.0  # m^3/s per molecule pair
    unbinding_rate_km1: Rate = 0.0
    degradation_rate_k2: Rate = 0.0
    exponent_mode: EnzymeExponent = EnzymeExponent.CORRECTED

    def e_tot(self, medium_volume: float) -> float:
        """Total enzyme concentration in molecules per m^3."""
        return self.enzyme_count / medium_volume


class SpectrumRow(_Frozen):
    """One tabulated wavelength of the photolysis rate integrand."""

    wavelength_nm: Wavelength
    quantum_yield_phi: float
    cross_section_sigma: float  # m^2
    actinic_flux_F: float  # photons m^-2 s^-1 nm^-1


class SpectrumTable(_Frozen):
    """Tabulated quantum yield, cross-section and actinic flux."""

    rows: tuple[SpectrumRow, ...]
    zenith_angle_theta: float = 0.0  # radians, describes the flux column

    @property
    def wavelengths(self) -> np.ndarray:
        return np.array([row.wavelength_nm for row in self.rows], dtype=float)

    def integrand(self) -> np.ndarray:
        """phi * sigma * F per tabulated wavelength (s^-1 nm^-1)."""
        return np.array(
            [r.quantum_yield_phi * r.cross_section_sigma * r.actinic_flux_F for r in self.rows],
            dtype=float,
        )


class Shell(_Frozen):
    """Virtual sphere around the receiver with a relative light intensity."""

    outer_radius: Length
    weight: float


class PhotolysisConfig(_Frozen):
    """Light-triggered degradation after T_op."""

    rate_J: OptionalRate = None
    spectrum: SpectrumTable | None = None
    T_op: OptionalTime = None
    # None selects the default 4-shell falloff derived from the geometry
    shells: tuple[Shell, ...] | None = None
    continuity_mode: ContinuityMode = ContinuityMode.AS_WRITTEN


class TransmissionConfig(_Frozen):
    """Binary concentration shift keying parameters."""

    molecules_N: int
    symbol_period_ts: Time = 0.1
    a_priori_P1: float = 0.5


class SimulationConfig(_Frozen):
    """Numerical settings of the Monte Carlo simulator."""

    timestep_dt: Time
    duration: Time
    sample_interval: Time
    repetitions: int = 100
    master_seed: int = 0
    scenario: Scenario = Scenario.NONE
    enzyme_mode: EnzymeMode = EnzymeMode.WELL_MIXED


class ScenarioConfig(_Frozen):
    """Full physical and numerical description of one experiment."""

    name: str = "unnamed"
    # Free-text caveats (e.g. unit interpretations) carried by presets
    notes: tuple[str, ...] = ()
    environment: Environment
    geometry: Geometry
    enzyme: EnzymeKinetics = Field(default_factory=EnzymeKinetics)
    photolysis: PhotolysisConfig = Field(default_factory=PhotolysisConfig)
    transmission: TransmissionConfig
    simulation: SimulationConfig

    @property
    def scenario(self) -> Scenario:
        return self.simulation.scenario

    def with_simulation(self, **changes: Any) -> ScenarioConfig:
        """Return a copy with simulation fields replaced (seed, scenario, ...)."""
        simulation = self.simulation.model_copy(update=changes)
        return self.model_copy(update={"simulation": simulation})

    def with_section(self, section: str, **changes: Any) -> ScenarioConfig:
        """Return a copy with fields of one nested section replaced."""
        current = getattr(self, section)
        return self.model_copy(update={section: current.model_copy(update=changes)})
