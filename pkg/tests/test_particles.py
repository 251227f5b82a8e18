"""Tests for the particle ensemble, Brownian motion and the receiver."""

from __future__ import annotations

import numpy as np
import pytest

from simulation.particles import (
    UNBOUND,
    ParticleEnsemble,
    Species,
    brownian_step,
    observe_receiver,
    reflect_boundary,
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class TestRelease:
    def test_layout(self):
        ens = ParticleEnsemble.release(3, [1.0, 0.0, 0.0], enzyme_positions=[[0, 0, 0], [0, 1, 0]])
        assert len(ens) == 5
        assert ens.n_molecules == 3
        assert ens.count(Species.INFORMATION) == 3
        assert ens.count(Species.ENZYME) == 2
        np.testing.assert_array_equal(ens.positions[:3], np.tile([1.0, 0.0, 0.0], (3, 1)))
        assert np.all(ens.partner == UNBOUND)

    def test_empty(self):
        ens = ParticleEnsemble.release(0, [0.0, 0.0, 0.0])
        assert len(ens) == 0
        assert ens.positions.shape == (0, 3)

    def test_free_enzymes_skip_bound(self):
        ens = ParticleEnsemble.release(1, [0, 0, 0], enzyme_positions=[[0, 0, 0], [1, 1, 1]])
        ens.partner[1] = 0
        np.testing.assert_array_equal(ens.free_enzymes(), [2])


class TestBrownianStep:
    def test_displacement_variance(self, rng):
        n, diffusion, dt = 100_000, 1e-10, 1e-3
        ens = ParticleEnsemble.release(n, [0.0, 0.0, 0.0])
        brownian_step(ens, diffusion, dt, rng)
        for axis in range(3):
            assert ens.positions[:, axis].var() == pytest.approx(2 * diffusion * dt, rel=0.03)
            assert abs(ens.positions[:, axis].mean()) < 4 * np.sqrt(2 * diffusion * dt / n)

    def test_products_do_not_move(self, rng):
        ens = ParticleEnsemble.release(4, [0.0, 0.0, 0.0])
        ens.species[1] = Species.PRODUCT
        brownian_step(ens, 1e-10, 1e-3, rng)
        np.testing.assert_array_equal(ens.positions[1], [0.0, 0.0, 0.0])
        assert np.all(ens.positions[[0, 2, 3]] != 0.0)

    def test_stream_use_independent_of_species(self):
        a = ParticleEnsemble.release(10, [0.0, 0.0, 0.0])
        b = ParticleEnsemble.release(10, [0.0, 0.0, 0.0])
        b.species[:5] = Species.PRODUCT
        brownian_step(a, 1e-10, 1e-3, np.random.default_rng(1))
        brownian_step(b, 1e-10, 1e-3, np.random.default_rng(1))
        np.testing.assert_array_equal(a.positions[5:], b.positions[5:])

    def test_per_particle_diffusion(self, rng):
        ens = ParticleEnsemble.release(2, [0.0, 0.0, 0.0])
        brownian_step(ens, np.array([1e-10, 0.0]), 1e-3, rng)
        np.testing.assert_array_equal(ens.positions[1], [0.0, 0.0, 0.0])


class TestReflectBoundary:
    def test_mirror(self):
        ens = ParticleEnsemble.release(1, [0.0, 0.0, 0.0])
        ens.positions[0] = [1.3, -1.25, 0.5]
        reflect_boundary(ens, 1.0)
        np.testing.assert_allclose(ens.positions[0], [0.7, -0.75, 0.5])

    def test_repeated_reflection(self):
        ens = ParticleEnsemble.release(1, [0.0, 0.0, 0.0])
        ens.positions[0] = [3.5, 0.0, 0.0]
        reflect_boundary(ens, 1.0)
        np.testing.assert_allclose(ens.positions[0], [-0.5, 0.0, 0.0])

    def test_inside_untouched(self):
        ens = ParticleEnsemble.release(1, [0.2, -1.0, 1.0])
        reflect_boundary(ens, 1.0)
        np.testing.assert_array_equal(ens.positions[0], [0.2, -1.0, 1.0])

    def test_random_walk_stays_inside(self, rng):
        ens = ParticleEnsemble.release(500, [0.0, 0.0, 0.0])
        for _ in range(50):
            brownian_step(ens, 1e-10, 1e-3, rng)
            reflect_boundary(ens, 1e-6)
        assert np.all(np.abs(ens.positions) <= 1e-6)


class TestObserveReceiver:
    def test_closed_ball(self):
        ens = ParticleEnsemble.release(3, [0.0, 0.0, 0.0])
        ens.positions[:] = [[1.0, 0.0, 0.0], [0.0, 0.5, 0.0], [1.0, 1.0, 0.0]]
        assert observe_receiver(ens, [0.0, 0.0, 0.0], 1.0) == 2

    def test_only_information_counted(self):
        ens = ParticleEnsemble.release(3, [0.0, 0.0, 0.0], enzyme_positions=[[0, 0, 0]])
        ens.species[0] = Species.COMPLEX
        ens.species[1] = Species.PRODUCT
        assert observe_receiver(ens, [0.0, 0.0, 0.0], 1.0) == 1

    def test_read_only(self):
        ens = ParticleEnsemble.release(5, [0.0, 0.0, 0.0])
        before = ens.positions.copy()
        observe_receiver(ens, [0.0, 0.0, 0.0], 1.0)
        np.testing.assert_array_equal(ens.positions, before)
