"""Tests for the enzyme and photolysis reaction steps."""

from __future__ import annotations

import math

import numpy as np
import pytest

from scenario.models import EnzymeMode
from simulation.particles import UNBOUND, ParticleEnsemble, Species
from simulation.reactions import (
    RELEASE_SEPARATION,
    EnzymeRates,
    enzyme_reaction_step,
    photolysis_step,
    shell_weight,
    sync_complexes,
)

ORIGIN = [0.0, 0.0, 0.0]


def _rates(**overrides) -> EnzymeRates:
    values = {
        "k1": 0.0,
        "km1": 0.0,
        "k2": 0.0,
        "e_tot": 0.0,
        "binding_radius": 1e-8,
        "half_extent": 1e-5,
    }
    values.update(overrides)
    return EnzymeRates(**values)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


class TestWellMixedEnzyme:
    def test_null_rates(self, rng):
        ens = ParticleEnsemble.release(100, ORIGIN)
        for _ in range(10):
            enzyme_reaction_step(ens, _rates(), 1e-3, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.INFORMATION) == 100

    def test_free_fraction_halves_at_ln2(self, rng):
        n, dt, steps = 20000, 1e-3, 100
        rate = math.log(2) / (steps * dt)
        ens = ParticleEnsemble.release(n, ORIGIN)
        rates = _rates(k1=rate / 1e18, e_tot=1e18)
        for _ in range(steps):
            enzyme_reaction_step(ens, rates, dt, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.INFORMATION) / n == pytest.approx(0.5, abs=0.02)
        assert ens.count(Species.COMPLEX) + ens.count(Species.INFORMATION) == n

    def test_unbind_and_degrade_split(self, rng):
        n, dt = 20000, 1e-3
        ens = ParticleEnsemble.release(n, ORIGIN)
        ens.species[:] = Species.COMPLEX
        rates = _rates(km1=-math.log(0.7) / dt, k2=-math.log(0.8) / dt)
        enzyme_reaction_step(ens, rates, dt, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.INFORMATION) / n == pytest.approx(0.3, abs=0.02)
        assert ens.count(Species.PRODUCT) / n == pytest.approx(0.2, abs=0.02)
        assert ens.count(Species.COMPLEX) / n == pytest.approx(0.5, abs=0.02)

    def test_new_complexes_wait_one_step(self, rng):
        ens = ParticleEnsemble.release(50, ORIGIN)
        rates = _rates(k1=1.0, e_tot=1e9, k2=1e9)
        enzyme_reaction_step(ens, rates, 1e-3, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.COMPLEX) == 50
        assert ens.count(Species.PRODUCT) == 0
        enzyme_reaction_step(ens, rates, 1e-3, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.PRODUCT) == 50

    def test_products_are_final(self, rng):
        ens = ParticleEnsemble.release(10, ORIGIN)
        ens.species[:] = Species.PRODUCT
        rates = _rates(k1=1.0, e_tot=1e9, km1=1e9, k2=1e9)
        enzyme_reaction_step(ens, rates, 1e-3, EnzymeMode.WELL_MIXED, rng)
        assert ens.count(Species.PRODUCT) == 10


class TestMicroscopicEnzyme:
    def test_binds_within_radius(self, rng):
        ens = ParticleEnsemble.release(1, ORIGIN, enzyme_positions=[[0.5e-8, 0.0, 0.0]])
        enzyme_reaction_step(ens, _rates(), 1e-6, EnzymeMode.MICROSCOPIC, rng)
        assert ens.species[0] == Species.COMPLEX
        assert ens.partner[0] == 1
        assert ens.partner[1] == 0

    def test_no_binding_outside_radius(self, rng):
        ens = ParticleEnsemble.release(1, ORIGIN, enzyme_positions=[[2e-8, 0.0, 0.0]])
        enzyme_reaction_step(ens, _rates(), 1e-6, EnzymeMode.MICROSCOPIC, rng)
        assert ens.species[0] == Species.INFORMATION

    def test_enzyme_takes_nearest_substrate(self, rng):
        ens = ParticleEnsemble.release(2, ORIGIN, enzyme_positions=[[0.6e-8, 0.0, 0.0]])
        ens.positions[1] = [0.5e-8, 0.0, 0.0]
        enzyme_reaction_step(ens, _rates(), 1e-6, EnzymeMode.MICROSCOPIC, rng)
        assert ens.species[0] == Species.INFORMATION
        assert ens.species[1] == Species.COMPLEX
        assert ens.partner[2] == 1

    def test_unbinding_places_substrate_outside_radius(self, rng):
        ens = ParticleEnsemble.release(1, ORIGIN, enzyme_positions=[ORIGIN])
        ens.species[0] = Species.COMPLEX
        ens.partner[0], ens.partner[1] = 1, 0
        rates = _rates(km1=1e12)
        enzyme_reaction_step(ens, rates, 1e-3, EnzymeMode.MICROSCOPIC, rng)
        assert ens.species[0] == Species.INFORMATION
        assert ens.partner[0] == UNBOUND
        assert ens.partner[1] == UNBOUND
        separation = np.linalg.norm(ens.positions[0] - ens.positions[1])
        assert separation == pytest.approx(RELEASE_SEPARATION * 1e-8)

    def test_degradation_frees_enzyme(self, rng):
        ens = ParticleEnsemble.release(1, ORIGIN, enzyme_positions=[ORIGIN])
        ens.species[0] = Species.COMPLEX
        ens.partner[0], ens.partner[1] = 1, 0
        enzyme_reaction_step(ens, _rates(k2=1e12), 1e-3, EnzymeMode.MICROSCOPIC, rng)
        assert ens.species[0] == Species.PRODUCT
        np.testing.assert_array_equal(ens.free_enzymes(), [1])

    def test_sync_complexes(self):
        ens = ParticleEnsemble.release(1, ORIGIN, enzyme_positions=[[1.0, 1.0, 1.0]])
        ens.species[0] = Species.COMPLEX
        ens.partner[0], ens.partner[1] = 1, 0
        ens.positions[0] = [0.3, 0.2, 0.1]
        sync_complexes(ens)
        np.testing.assert_array_equal(ens.positions[1], [0.3, 0.2, 0.1])


class TestShellWeight:
    @pytest.mark.parametrize(
        ("rho", "expected"),
        [(0.0, 1.0), (0.5, 1.0), (1.0, 1.0), (1.5, 0.5), (3.0, 0.25), (3.1, 0.0)],
    )
    def test_lookup(self, rho, expected):
        assert shell_weight(rho, [1.0, 2.0, 3.0], [1.0, 0.5, 0.25]) == expected


class TestPhotolysisStep:
    def _run(self, ens, rng, rate, steps, dt=1e-3, light_time=0.0, start=0.0):
        for k in range(steps):
            photolysis_step(
                ens, rate, [1.0], [1.0], light_time, start + k * dt, dt, ORIGIN, rng
            )

    def test_dark_before_light_time(self, rng):
        ens = ParticleEnsemble.release(100, ORIGIN)
        self._run(ens, rng, 1e9, steps=10, light_time=1.0)
        assert ens.count(Species.INFORMATION) == 100

    def test_saturation(self, rng):
        ens = ParticleEnsemble.release(100, ORIGIN)
        self._run(ens, rng, 1e9, steps=1)
        assert ens.count(Species.PRODUCT) == 100

    def test_survival_is_exponential(self, rng):
        n, dt, steps = 20000, 1e-3, 50
        rate = 20.0
        ens = ParticleEnsemble.release(n, ORIGIN)
        self._run(ens, rng, rate, steps=steps, dt=dt)
        survival = ens.count(Species.INFORMATION) / n
        assert survival == pytest.approx(math.exp(-rate * steps * dt), abs=0.015)

    def test_dark_beyond_last_shell(self, rng):
        ens = ParticleEnsemble.release(100, [2.0, 0.0, 0.0])
        self._run(ens, rng, 1e9, steps=3)
        assert ens.count(Species.INFORMATION) == 100

    def test_zero_rate_is_noop(self, rng):
        ens = ParticleEnsemble.release(100, ORIGIN)
        self._run(ens, rng, 0.0, steps=5)
        assert ens.count(Species.INFORMATION) == 100
