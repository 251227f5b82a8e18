"""Particle ensemble, Brownian motion and the passive receiver.

Particles are stored column-wise: one (n, 3) position array, one species
array and one partner array linking a bound complex to its enzyme in the
microscopic enzyme mode. Indices 0 .. n_molecules-1 are information molecules
(whatever their current species); enzymes, if any, follow.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from numpy.typing import ArrayLike

UNBOUND = -1


class Species(IntEnum):
    INFORMATION = 0
    ENZYME = 1
    COMPLEX = 2  # enzyme-substrate complex, tracked at the substrate slot
    PRODUCT = 3  # degraded; never counted, never moved


@dataclass
class ParticleEnsemble:
    """Mutable per-repetition particle state; owned by a single worker."""

    positions: np.ndarray  # (n, 3) meters
    species: np.ndarray  # (n,) int8 Species codes
    partner: np.ndarray  # (n,) index of the bound counterpart, UNBOUND otherwise
    n_molecules: int

    @classmethod
    def release(
        cls, n_molecules: int, at: ArrayLike, enzyme_positions: ArrayLike | None = None
    ) -> ParticleEnsemble:
        """Impulse release of information molecules at one point, plus optional enzymes."""
        origin = np.asarray(at, dtype=float).reshape(1, 3)
        molecules = np.repeat(origin, n_molecules, axis=0)
        enzymes = (
            np.empty((0, 3))
            if enzyme_positions is None
            else np.asarray(enzyme_positions, dtype=float).reshape(-1, 3)
        )
        positions = np.vstack([molecules, enzymes])
        species = np.concatenate(
            [
                np.full(n_molecules, Species.INFORMATION, dtype=np.int8),
                np.full(len(enzymes), Species.ENZYME, dtype=np.int8),
            ]
        )
        partner = np.full(len(positions), UNBOUND, dtype=np.int64)
        return cls(positions=positions, species=species, partner=partner, n_molecules=n_molecules)

    def __len__(self) -> int:
        return len(self.species)

    @property
    def alive(self) -> np.ndarray:
        return self.species != Species.PRODUCT

    def mask(self, species: Species) -> np.ndarray:
        return self.species == species

    def count(self, species: Species) -> int:
        return int(np.count_nonzero(self.species == species))

    def free_enzymes(self) -> np.ndarray:
        """Indices of enzymes not bound in a complex."""
        return np.flatnonzero((self.species == Species.ENZYME) & (self.partner == UNBOUND))


def brownian_step(
    ensemble: ParticleEnsemble,
    diffusion: float | np.ndarray,
    dt: float,
    rng: np.random.Generator,
) -> ParticleEnsemble:
    """Euler-Maruyama step: each live coordinate moves by N(0, 2 D dt).

    Normals are drawn for every particle slot, products included, so the
    random stream consumed per step depends only on the ensemble size.

    Args:
        ensemble: State to update in place.
        diffusion: One coefficient for all particles or one per particle (m^2/s).
        dt: Timestep in seconds, > 0.
        rng: Motion stream.

    Returns:
        The same ensemble, moved.
    """
    noise = rng.standard_normal(ensemble.positions.shape)
    coefficients = np.broadcast_to(np.asarray(diffusion, dtype=float), (len(ensemble),))
    sigma = np.sqrt(2.0 * coefficients * dt)
    sigma = np.where(ensemble.alive, sigma, 0.0)
    ensemble.positions += noise * sigma[:, None]
    return ensemble


def reflect_boundary(ensemble: ParticleEnsemble, half_extent: float) -> ParticleEnsemble:
    """Mirror coordinates beyond +-half_extent back into the cube, repeatedly."""
    pos = ensemble.positions
    while True:
        above = pos > half_extent
        below = pos < -half_extent
        if not (above.any() or below.any()):
            return ensemble
        pos[above] = 2.0 * half_extent - pos[above]
        pos[below] = -2.0 * half_extent - pos[below]


def observe_receiver(ensemble: ParticleEnsemble, center: ArrayLike, radius: float) -> int:
    """Number of information molecules inside the closed receiver ball. Read-only."""
    info = ensemble.species == Species.INFORMATION
    if not info.any():
        return 0
    offset = ensemble.positions[info] - np.asarray(center, dtype=float)
    return int(np.count_nonzero(np.einsum("ij,ij->i", offset, offset) <= radius * radius))
