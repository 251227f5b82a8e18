"""Reaction channels: Michaelis-Menten enzymes and light-gated photolysis.

Every first-order event in a step of length dt fires with probability
1 - exp(-k dt). Reaction draws come from their own stream so the motion
stream is shared across scenarios.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.spatial import cKDTree

from scenario.models import EnzymeMode
from scenario.resolve import ResolvedScenario
from simulation.particles import UNBOUND, ParticleEnsemble, Species

logger = logging.getLogger(__name__)

# Released substrates are placed just outside the binding radius
RELEASE_SEPARATION = 1.01


@dataclass(frozen=True)
class EnzymeRates:
    """Kinetic constants needed per step."""

    k1: float  # m^3/s
    km1: float  # 1/s
    k2: float  # 1/s
    e_tot: float  # enzymes per m^3
    binding_radius: float  # m
    half_extent: float  # m

    @classmethod
    def from_resolved(cls, resolved: ResolvedScenario) -> EnzymeRates:
        return cls(
            k1=resolved.k1,
            km1=resolved.km1,
            k2=resolved.k2,
            e_tot=resolved.e_tot,
            binding_radius=resolved.binding_radius,
            half_extent=resolved.half_extent,
        )


def _probability(rate: float, dt: float) -> float:
    return float(-np.expm1(-rate * dt))


def _bind_microscopic(
    ensemble: ParticleEnsemble, substrates: np.ndarray, radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """Pair substrates with a free enzyme within ``radius``; each enzyme takes its nearest."""
    enzymes = ensemble.free_enzymes()
    if substrates.size == 0 or enzymes.size == 0 or radius <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    tree = cKDTree(ensemble.positions[enzymes])
    dist, nearest = tree.query(
        ensemble.positions[substrates], k=1, distance_upper_bound=radius
    )
    hit = nearest < enzymes.size
    subs, enz, dist = substrates[hit], enzymes[nearest[hit]], dist[hit]
    # One substrate per enzyme: keep the closest, ties by substrate index
    order = np.lexsort((subs, dist, enz))
    subs, enz = subs[order], enz[order]
    _, first = np.unique(enz, return_index=True)
    return subs[first], enz[first]


def enzyme_reaction_step(
    ensemble: ParticleEnsemble,
    rates: EnzymeRates,
    dt: float,
    mode: EnzymeMode,
    rng: np.random.Generator,
) -> ParticleEnsemble:
    """Advance E + S <-> M_c -> E + P by one step.

    Well-mixed mode binds each information molecule with probability
    1 - exp(-k1 E_tot dt). Microscopic mode binds an information molecule
    that lies within the Smoluchowski radius of a free enzyme. Complexes then
    unbind with probability 1 - exp(-k_-1 dt) or degrade to product with
    probability 1 - exp(-k2 dt); one uniform draw decides between the two.
    Complexes formed in this step react from the next step on.

    Args:
        ensemble: State to update in place.
        rates: Kinetic constants.
        dt: Timestep in seconds.
        mode: Enzyme representation.
        rng: Reaction stream.

    Returns:
        The same ensemble.
    """
    n = ensemble.n_molecules
    species = ensemble.species
    u = rng.random(n)
    info = np.flatnonzero(species[:n] == Species.INFORMATION)
    complexes = np.flatnonzero(species[:n] == Species.COMPLEX)

    p_unbind = _probability(rates.km1, dt)
    p_degrade = _probability(rates.k2, dt)
    unbind = complexes[u[complexes] < p_unbind]
    degrade = complexes[(u[complexes] >= p_unbind) & (u[complexes] < p_unbind + p_degrade)]

    if mode is EnzymeMode.WELL_MIXED:
        p_bind = _probability(rates.k1 * rates.e_tot, dt)
        species[info[u[info] < p_bind]] = Species.COMPLEX
        species[unbind] = Species.INFORMATION
        species[degrade] = Species.PRODUCT
        return ensemble

    substrates, enzymes = _bind_microscopic(ensemble, info, rates.binding_radius)
    species[substrates] = Species.COMPLEX
    ensemble.partner[substrates] = enzymes
    ensemble.partner[enzymes] = substrates

    if unbind.size:
        # Step the substrate out of the binding radius in a random direction
        direction = rng.standard_normal((unbind.size, 3))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        offset = direction * rates.binding_radius * RELEASE_SEPARATION
        ensemble.positions[unbind] = np.clip(
            ensemble.positions[unbind] + offset, -rates.half_extent, rates.half_extent
        )
        species[unbind] = Species.INFORMATION
    for released in (unbind, degrade):
        ensemble.partner[ensemble.partner[released]] = UNBOUND
        ensemble.partner[released] = UNBOUND
    species[degrade] = Species.PRODUCT
    return ensemble


def sync_complexes(ensemble: ParticleEnsemble) -> None:
    """Carry each bound enzyme along with its complex."""
    bound = np.flatnonzero(ensemble.species[: ensemble.n_molecules] == Species.COMPLEX)
    partners = ensemble.partner[bound]
    linked = partners != UNBOUND
    ensemble.positions[partners[linked]] = ensemble.positions[bound[linked]]


def shell_weight(rho: ArrayLike, radii: ArrayLike, weights: ArrayLike) -> np.ndarray:
    """Relative light intensity at distance rho from the receiver center.

    Shell k covers (radii[k-1], radii[k]]; the first shell includes the
    receiver itself. Beyond the last radius the weight is 0.
    """
    edges = np.asarray(radii, dtype=float)
    table = np.append(np.asarray(weights, dtype=float), 0.0)
    return table[np.searchsorted(edges, np.asarray(rho, dtype=float), side="left")]


def photolysis_step(
    ensemble: ParticleEnsemble,
    rate_j: float,
    shell_radii: ArrayLike,
    shell_weights: ArrayLike,
    light_time: float,
    t_now: float,
    dt: float,
    receiver_center: ArrayLike,
    rng: np.random.Generator,
) -> ParticleEnsemble:
    """Degrade information molecules with probability 1 - exp(-J w(rho) dt).

    No-op while the light is off (t_now < light_time).
    """
    if t_now < light_time or rate_j == 0:
        return ensemble
    n = ensemble.n_molecules
    u = rng.random(n)
    info = np.flatnonzero(ensemble.species[:n] == Species.INFORMATION)
    if info.size == 0:
        return ensemble
    offset = ensemble.positions[info] - np.asarray(receiver_center, dtype=float)
    rho = np.sqrt(np.einsum("ij,ij->i", offset, offset))
    weight = shell_weight(rho, shell_radii, shell_weights)
    p = -np.expm1(-rate_j * weight * dt)
    ensemble.species[info[u[info] < p]] = Species.PRODUCT
    return ensemble
