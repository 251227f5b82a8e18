"""Monte Carlo impulse-response runs.

One repetition releases N molecules at the transmitter and loops
brownian_step -> reflect_boundary -> reaction step, observing the receiver on
the sample grid. Each repetition draws from counter-based Philox streams keyed
by (master_seed, repetition_index), so results do not depend on how
repetitions are spread over workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np
from tqdm import tqdm

from config import get_settings
from errors import BudgetExceededError
from scenario.models import EnzymeMode, Scenario, ScenarioConfig
from scenario.resolve import ResolvedScenario, resolve
from simulation.particles import (
    ParticleEnsemble,
    Species,
    brownian_step,
    observe_receiver,
    reflect_boundary,
)
from simulation.reactions import (
    EnzymeRates,
    enzyme_reaction_step,
    photolysis_step,
    sync_complexes,
)
from simulation.statistics import ObservationSeries

logger = logging.getLogger(__name__)


def repetition_streams(
    master_seed: int, repetition_index: int
) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent motion and reaction streams for one repetition."""
    root = np.random.SeedSequence(entropy=master_seed, spawn_key=(repetition_index,))
    motion, reaction = root.spawn(2)
    return np.random.Generator(np.random.Philox(motion)), np.random.Generator(
        np.random.Philox(reaction)
    )


def _limiting_parameter(resolved: ResolvedScenario) -> str:
    if resolved.n_steps >= resolved.molecules:
        return "simulation.timestep_dt"
    return "transmission.molecules_N"


def check_budget(resolved: ResolvedScenario, repetitions: int = 1) -> None:
    """Raise if the run needs more particle-steps than the configured ceiling.

    Raises:
        BudgetExceededError: Naming the parameter that drives the cost.
    """
    ceiling = get_settings().max_particle_steps
    cost = resolved.particle_steps() * repetitions
    if cost <= ceiling:
        return
    single = resolved.particle_steps()
    parameter = _limiting_parameter(resolved) if single > ceiling else "simulation.repetitions"
    raise BudgetExceededError(parameter, cost, ceiling)


def _diffusivities(ensemble: ParticleEnsemble, resolved: ResolvedScenario) -> np.ndarray:
    species = ensemble.species
    return np.where(
        species == Species.INFORMATION,
        resolved.diffusion,
        np.where(species == Species.PRODUCT, 0.0, resolved.enzyme_diffusion),
    )


def run_impulse(config: ScenarioConfig, repetition_index: int) -> ObservationSeries:
    """Simulate one impulse release.

    Args:
        config: A validated scenario.
        repetition_index: Which repetition; selects the random streams.

    Returns:
        Receiver counts on the sample grid, starting at t = 0.

    Raises:
        BudgetExceededError: If one repetition alone exceeds the particle-step budget.
    """
    resolved = resolve(config)
    check_budget(resolved)
    motion, reaction = repetition_streams(resolved.master_seed, repetition_index)

    microscopic = (
        resolved.scenario is Scenario.ENZYME and resolved.enzyme_mode is EnzymeMode.MICROSCOPIC
    )
    enzyme_positions = None
    if microscopic:
        h = resolved.half_extent
        enzyme_positions = reaction.uniform(-h, h, size=(resolved.enzyme_count, 3))
    ensemble = ParticleEnsemble.release(
        resolved.molecules, resolved.transmitter_position, enzyme_positions
    )
    rates = EnzymeRates.from_resolved(resolved)
    center = resolved.receiver_center
    radius = resolved.receiver_radius
    stride = resolved.sample_stride
    times = resolved.sample_times()
    counts = np.zeros(times.size, dtype=np.int64)
    counts[0] = observe_receiver(ensemble, center, radius)

    diffusion: float | np.ndarray = resolved.diffusion
    for step in range(1, resolved.n_steps + 1):
        t_now = (step - 1) * resolved.dt
        if resolved.scenario is Scenario.ENZYME:
            diffusion = _diffusivities(ensemble, resolved)
        brownian_step(ensemble, diffusion, resolved.dt, motion)
        reflect_boundary(ensemble, resolved.half_extent)
        if resolved.scenario is Scenario.ENZYME:
            if microscopic:
                sync_complexes(ensemble)
            enzyme_reaction_step(ensemble, rates, resolved.dt, resolved.enzyme_mode, reaction)
        elif resolved.scenario is Scenario.PHOTOLYSIS:
            photolysis_step(
                ensemble,
                resolved.rate_j,
                resolved.shell_radii,
                resolved.shell_weights,
                resolved.light_time,
                t_now,
                resolved.dt,
                center,
                reaction,
            )
        if step % stride == 0:
            counts[step // stride] = observe_receiver(ensemble, center, radius)

    logger.debug(
        "Repetition %d of '%s' done: peak count %d", repetition_index, resolved.name, counts.max()
    )
    return ObservationSeries(
        sample_times=times,
        counts=counts,
        repetition_index=repetition_index,
        seed_used=resolved.master_seed,
    )


def run_repetitions(config: ScenarioConfig, workers: int | None = None) -> list[ObservationSeries]:
    """Run every repetition of a scenario, in repetition order.

    Args:
        config: A validated scenario.
        workers: Process count; defaults to Settings.default_workers. With one
            worker everything runs in-process.

    Returns:
        One series per repetition, ordered by repetition index.

    Raises:
        BudgetExceededError: If the whole run exceeds the particle-step budget.
    """
    settings = get_settings()
    resolved = resolve(config)
    check_budget(resolved, resolved.repetitions)
    workers = workers or settings.default_workers
    indices = range(resolved.repetitions)
    logger.info(
        "Simulating '%s' (%s): %d repetitions on %d worker(s)",
        resolved.name,
        resolved.scenario.value,
        resolved.repetitions,
        workers,
    )
    progress = partial(
        tqdm,
        total=resolved.repetitions,
        desc=f"Simulating {resolved.scenario.value}",
        disable=not settings.show_progress,
    )
    task = partial(run_impulse, config)
    if workers == 1:
        return [task(i) for i in progress(indices)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(progress(executor.map(task, indices)))
