"""Expected receiver counts after an impulse release.

Three closed forms share the free-diffusion point-observer kernel

    S(t) = N * V / (8 * (pi * D * t)^(3/2)) * exp(-d^2 / (4 * D * t))

and differ in how reactions shrink it: enzymes multiply by a first-order
decay, photolysis freezes the kernel at T_op and decays from there. The
reaction curves are lower bounds on the true expected count.

All functions accept a scalar or an array of times and are pure.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from detection.itr import CumulativeCounts, itr
from errors import DomainError
from scenario.models import (
    ContinuityMode,
    EnzymeExponent,
    Environment,
    Geometry,
    Scenario,
    ScenarioConfig,
)
from scenario.resolve import ResolvedScenario, resolve

logger = logging.getLogger(__name__)

LIGHT_SWEEP_COLUMNS = ["light_time_s", "peak_count", "count_at_light_time", "itr"]


@dataclass(frozen=True)
class ImpulseCurve:
    """Expected molecule count inside the receiver on a time grid."""

    times: np.ndarray
    expected_counts: np.ndarray
    scenario: Scenario

    @property
    def peak_index(self) -> int:
        return int(np.argmax(self.expected_counts))

    @property
    def peak_time(self) -> float:
        return float(self.times[self.peak_index])

    @property
    def peak_count(self) -> float:
        return float(self.expected_counts[self.peak_index])

    def at(self, t: float) -> float:
        """Linear interpolation of the curve at time t."""
        return float(np.interp(t, self.times, self.expected_counts))


def _as_output(values: np.ndarray, scalar: bool) -> float | np.ndarray:
    return float(values[()]) if scalar else values


def _kernel(
    t: np.ndarray, distance: float, diffusion: float, volume: float, molecules: float
) -> np.ndarray:
    """Free-diffusion count; t = 0 maps to 0 (continuous limit for d > 0)."""
    out = np.zeros_like(t, dtype=float)
    positive = t > 0
    tp = t[positive]
    prefactor = molecules * volume / (8.0 * (math.pi * diffusion * tp) ** 1.5)
    out[positive] = prefactor * np.exp(-(distance**2) / (4.0 * diffusion * tp))
    return out


def _times(t: ArrayLike) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError("t", "times must be >= 0")
    return np.atleast_1d(arr).copy() if arr.ndim == 0 else arr, arr.ndim == 0


def expected_count_no_reaction(
    t: ArrayLike, geometry: Geometry, environment: Environment, molecules: float
) -> float | np.ndarray:
    """Expected count with free diffusion only.

    Args:
        t: Time(s) since release in seconds, >= 0.
        geometry: Distance and receiver size.
        environment: Supplies the diffusion coefficient.
        molecules: Number of molecules N released at t = 0.

    Returns:
        Expected count, with the shape of ``t``.
    """
    times, scalar = _times(t)
    values = _kernel(
        times, geometry.distance_d, environment.diffusion(), geometry.volume, molecules
    )
    return _as_output(values.reshape(np.shape(t)), scalar)


def expected_count_enzyme(
    t: ArrayLike,
    geometry: Geometry,
    environment: Environment,
    molecules: float,
    k1: float,
    e_tot: float,
    exponent_mode: EnzymeExponent = EnzymeExponent.CORRECTED,
) -> float | np.ndarray:
    """Lower bound on the expected count with enzymatic degradation.

    The free-diffusion count is multiplied by exp(-k1 * E_tot * t). In
    ``AS_PRINTED`` mode the factor is exp(-k1 * E_tot), the time-free form
    kept only for comparison.

    Raises:
        DomainError: If k1 or E_tot is negative.
    """
    if k1 < 0:
        raise DomainError("k1", f"must be >= 0, got {k1!r}")
    if e_tot < 0:
        raise DomainError("e_tot", f"must be >= 0, got {e_tot!r}")
    times, scalar = _times(t)
    base = _kernel(times, geometry.distance_d, environment.diffusion(), geometry.volume, molecules)
    rate = k1 * e_tot
    if exponent_mode is EnzymeExponent.AS_PRINTED:
        values = base * math.exp(-rate)
    else:
        values = base * np.exp(-rate * times)
    return _as_output(values.reshape(np.shape(t)), scalar)


def expected_count_photolysis(
    t: ArrayLike,
    geometry: Geometry,
    environment: Environment,
    molecules: float,
    rate_j: float,
    light_time: float,
    continuity_mode: ContinuityMode = ContinuityMode.AS_WRITTEN,
) -> float | np.ndarray:
    """Lower bound on the expected count with light switched on at T_op.

    Before ``light_time`` this is the free-diffusion count. From ``light_time``
    on, the kernel is frozen at its T_op value and multiplied by exp(-J t)
    (``AS_WRITTEN``) or exp(-J (t - T_op)) (``SHIFTED``, continuous at T_op).

    Raises:
        DomainError: If J < 0 or light_time <= 0.
    """
    if rate_j < 0:
        raise DomainError("rate_J", f"must be >= 0, got {rate_j!r}")
    if not light_time > 0:
        raise DomainError("T_op", f"must be > 0, got {light_time!r}")
    times, scalar = _times(t)
    diffusion = environment.diffusion()
    base = _kernel(times, geometry.distance_d, diffusion, geometry.volume, molecules)
    frozen = _kernel(
        np.array([light_time]), geometry.distance_d, diffusion, geometry.volume, molecules
    )[0]
    if continuity_mode is ContinuityMode.SHIFTED:
        decay = np.exp(-rate_j * (times - light_time))
    else:
        decay = np.exp(-rate_j * times)
    values = np.where(times < light_time, base, frozen * decay)
    return _as_output(values.reshape(np.shape(t)), scalar)


def _check_grid(times: np.ndarray) -> None:
    if times.ndim != 1 or times.size == 0:
        raise DomainError("grid", "time grid must be a non-empty 1-D sequence")
    if np.any(times < 0):
        raise DomainError("grid", "time grid must be non-negative")
    if np.any(np.diff(times) <= 0):
        raise DomainError("grid", "time grid must be strictly increasing")


def _curve(
    scenario: Scenario, config: ScenarioConfig, resolved: ResolvedScenario, times: np.ndarray
) -> np.ndarray:
    geom = config.geometry
    env = config.environment
    n = resolved.molecules
    if scenario is Scenario.NONE:
        return np.asarray(expected_count_no_reaction(times, geom, env, n))
    if scenario is Scenario.ENZYME:
        return np.asarray(
            expected_count_enzyme(
                times, geom, env, n, resolved.k1, resolved.e_tot, resolved.enzyme_exponent
            )
        )
    if scenario is Scenario.PHOTOLYSIS:
        return np.asarray(
            expected_count_photolysis(
                times,
                geom,
                env,
                n,
                resolved.rate_j,
                resolved.light_time,
                resolved.continuity_mode,
            )
        )
    raise DomainError("scenario", f"unknown scenario {scenario!r}")


def impulse_curve(
    scenario: Scenario | str, config: ScenarioConfig, times: ArrayLike
) -> ImpulseCurve:
    """Evaluate the closed form of one scenario on a time grid.

    Args:
        scenario: Which closed form to apply.
        config: A validated scenario supplying every parameter.
        times: Strictly increasing, non-negative grid in seconds.

    Returns:
        The expected-count curve.

    Raises:
        DomainError: On an empty or malformed grid, or an unknown scenario.
    """
    try:
        scenario = Scenario(scenario)
    except ValueError as exc:
        raise DomainError("scenario", f"unknown scenario {scenario!r}") from exc
    grid = np.asarray(times, dtype=float)
    _check_grid(grid)
    counts = _curve(scenario, config, resolve(config), grid)
    logger.debug("Evaluated %s curve on %d points", scenario.value, grid.size)
    return ImpulseCurve(times=grid, expected_counts=counts, scenario=scenario)


def light_time_sweep(
    config: ScenarioConfig,
    candidate_times: ArrayLike,
    t_s: float,
    t_end: float,
) -> pd.DataFrame:
    """Photolysis curve metrics for a range of light activation times.

    For each candidate light time the photolysis closed form is evaluated on
    the scenario's sample grid up to ``t_end``.

    Args:
        config: Scenario supplying geometry, J and the continuity mode.
        candidate_times: Light activation times in seconds, each > 0.
        t_s: Symbol period used for the ITR.
        t_end: End of the observation window for the ITR.

    Returns:
        One row per candidate with columns light_time_s, peak_count,
        count_at_light_time and itr.
    """
    candidates = np.atleast_1d(np.asarray(candidate_times, dtype=float))
    if candidates.size == 0:
        raise DomainError("light_times", "at least one candidate light time is required")
    resolved = resolve(config)
    step = resolved.sample_interval
    n = int(math.floor(t_end / step + 1e-9))
    grid = np.arange(n + 1, dtype=float) * step
    _check_grid(grid)

    rows = []
    for light_time in candidates:
        counts = np.asarray(
            expected_count_photolysis(
                grid,
                config.geometry,
                config.environment,
                resolved.molecules,
                resolved.rate_j,
                float(light_time),
                resolved.continuity_mode,
            )
        )
        curve = ImpulseCurve(times=grid, expected_counts=counts, scenario=Scenario.PHOTOLYSIS)
        rows.append(
            {
                "light_time_s": float(light_time),
                "peak_count": curve.peak_count,
                "count_at_light_time": curve.at(float(light_time)),
                "itr": itr(CumulativeCounts.from_curve(curve), t_s, t_end).value,
            }
        )
    logger.info("Light-time sweep over %d candidates", candidates.size)
    return pd.DataFrame(rows, columns=LIGHT_SWEEP_COLUMNS)
