"""Tests for the Monte Carlo driver: streams, determinism, budget and parallelism."""

from __future__ import annotations

import numpy as np
import pytest

from config import reset_settings
from errors import BudgetExceededError
from scenario.models import EnzymeMode
from scenario.resolve import resolve
from simulation.engine import check_budget, repetition_streams, run_impulse, run_repetitions
from tests.conftest import make_config

ENZYME = {
    "enzyme_count": 500,
    "binding_rate_k1": 1e-17,
    "unbinding_rate_km1": 12.0,
    "degradation_rate_k2": 1.0,
}


class TestRepetitionStreams:
    def test_reproducible(self):
        a, _ = repetition_streams(42, 3)
        b, _ = repetition_streams(42, 3)
        assert a.random() == b.random()

    def test_streams_differ(self):
        motion, reaction = repetition_streams(42, 0)
        other, _ = repetition_streams(42, 1)
        first = motion.random(4)
        assert not np.array_equal(first, reaction.random(4))
        assert not np.array_equal(first, other.random(4))


class TestRunImpulse:
    def test_zero_molecules(self):
        series = run_impulse(make_config(molecules=0), 0)
        assert np.all(series.counts == 0)

    def test_shape_and_start(self):
        config = make_config(distance="2 um")
        series = run_impulse(config, 0)
        np.testing.assert_array_equal(series.sample_times, resolve(config).sample_times())
        assert series.counts[0] == 0
        assert series.counts.max() > 0

    def test_deterministic(self):
        config = make_config(scenario="enzyme", enzyme=ENZYME)
        a = run_impulse(config, 2)
        b = run_impulse(config, 2)
        np.testing.assert_array_equal(a.counts, b.counts)
        assert a.seed_used == 7
        assert a.repetition_index == 2

    def test_seed_changes_result(self):
        a = run_impulse(make_config(distance="2 um", seed=1), 0)
        b = run_impulse(make_config(distance="2 um", seed=2), 0)
        assert not np.array_equal(a.counts, b.counts)

    def test_counts_bounded_by_molecules(self):
        config = make_config(molecules=50, distance="1.5 um", radius="1 um")
        assert run_impulse(config, 0).counts.max() <= 50

    def test_photolysis_never_exceeds_free_diffusion(self):
        none = run_impulse(make_config(distance="2 um"), 0)
        photo_config = make_config(
            scenario="photolysis", distance="2 um", photolysis={"rate_J": 200.0}
        )
        photo = run_impulse(photo_config, 0)
        t_op = resolve(photo_config).light_time
        before = none.sample_times < t_op
        np.testing.assert_array_equal(photo.counts[before], none.counts[before])
        assert np.all(photo.counts <= none.counts)

    def test_well_mixed_enzyme_never_exceeds_free_diffusion(self):
        none = run_impulse(make_config(distance="2 um"), 0)
        enzyme_config = make_config(scenario="enzyme", distance="2 um", enzyme=ENZYME)
        enzyme = run_impulse(enzyme_config, 0)
        assert np.all(enzyme.counts <= none.counts)

    def test_microscopic_runs(self):
        config = make_config(scenario="enzyme", enzyme=ENZYME).with_simulation(
            enzyme_mode=EnzymeMode.MICROSCOPIC
        )
        series = run_impulse(config, 0)
        assert series.counts.max() <= 200


class TestBudget:
    def test_within_budget(self):
        check_budget(resolve(make_config()), repetitions=3)

    def test_single_repetition_too_large(self, monkeypatch):
        monkeypatch.setenv("MAX_PARTICLE_STEPS", "1000")
        reset_settings()
        with pytest.raises(BudgetExceededError) as info:
            run_impulse(make_config(), 0)
        assert info.value.parameter == "simulation.timestep_dt"

    def test_molecules_named_when_dominant(self, monkeypatch):
        monkeypatch.setenv("MAX_PARTICLE_STEPS", "1000")
        reset_settings()
        with pytest.raises(BudgetExceededError) as info:
            check_budget(resolve(make_config(molecules=100000)))
        assert info.value.parameter == "transmission.molecules_N"

    def test_repetitions_named(self, monkeypatch):
        monkeypatch.setenv("MAX_PARTICLE_STEPS", "100000")
        reset_settings()
        with pytest.raises(BudgetExceededError) as info:
            run_repetitions(make_config(repetitions=3))
        assert info.value.parameter == "simulation.repetitions"
        assert info.value.cost == pytest.approx(3 * 200 * 400)


class TestRunRepetitions:
    def test_order_and_count(self):
        results = run_repetitions(make_config(repetitions=3), workers=1)
        assert [s.repetition_index for s in results] == [0, 1, 2]

    def test_worker_count_does_not_change_results(self):
        config = make_config(scenario="photolysis", photolysis={"rate_J": 50.0}, repetitions=4)
        serial = run_repetitions(config, workers=1)
        parallel = run_repetitions(config, workers=2)
        for a, b in zip(serial, parallel, strict=True):
            assert a.counts.tobytes() == b.counts.tobytes()

    def test_matches_single_runs(self):
        config = make_config(repetitions=2)
        results = run_repetitions(config, workers=1)
        np.testing.assert_array_equal(results[1].counts, run_impulse(config, 1).counts)
