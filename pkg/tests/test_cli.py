"""End-to-end tests of the photomc subcommands, exit codes and artifacts."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from config import reset_settings
from errors import DomainError
from runner.cli import (
    EXIT_BAD_ARGUMENTS,
    EXIT_BUDGET_EXCEEDED,
    EXIT_CONFIG_INVALID,
    EXIT_IO_FAILURE,
    EXIT_OK,
    main,
    parse_grid,
    parse_zeta,
)
from runner.manifest import MANIFEST_NAME, RunManifest

SMALL_TOML = """\
name = "small"

[environment]
medium_half_extent = "10 um"
diffusion_coefficient = 1e-10

[geometry]
distance_d = "2 um"
receiver_radius_r = "1 um"

[transmission]
molecules_N = {molecules}
symbol_period_ts = "10 ms"

[simulation]
timestep_dt = "50 us"
duration = "30 ms"
sample_interval = "1 ms"
repetitions = {repetitions}
master_seed = 11
scenario = "{scenario}"

[photolysis]
rate_J = 100
"""


def _write_config(tmp_path: Path, *, molecules=100, repetitions=2, scenario="none") -> Path:
    path = tmp_path / f"small-{scenario}-{molecules}.toml"
    path.write_text(
        SMALL_TOML.format(molecules=molecules, repetitions=repetitions, scenario=scenario)
    )
    return path


class TestParseGrid:
    def test_inclusive_stop(self):
        np.testing.assert_allclose(parse_grid("0:0.3:0.1"), [0.0, 0.1, 0.2, 0.3])

    @pytest.mark.parametrize("text", ["0.5:0.1:0.01", "0:1:0", "0:1", "a:b:c", ""])
    def test_rejected(self, text):
        with pytest.raises(DomainError):
            parse_grid(text)


class TestParseZeta:
    def test_range(self):
        assert parse_zeta("2:5") == range(2, 6)

    def test_single_value(self):
        assert parse_zeta("0") == range(0, 1)

    def test_empty(self):
        with pytest.raises(DomainError):
            parse_zeta("5:2")


class TestAnalyticCommand:
    def test_writes_curve_and_manifest(self, tmp_path, capsys):
        assert main(["analytic", "--preset", "desk-none", "--out", str(tmp_path)]) == EXIT_OK
        df = pd.read_csv(tmp_path / "none_curve.csv")
        assert list(df.columns) == ["time_s", "expected_count"]
        assert df["expected_count"].max() == pytest.approx(24.7, abs=0.2)
        assert "desk-none" in capsys.readouterr().out
        manifest = RunManifest.load(tmp_path / MANIFEST_NAME)
        assert manifest.command == "analytic"
        assert manifest.master_seed == 20240501
        assert manifest.verify(tmp_path) == []

    def test_manifest_is_pydantic_json(self, tmp_path):
        assert main(["analytic", "--preset", "desk-none", "--out", str(tmp_path)]) == EXIT_OK
        text = (tmp_path / MANIFEST_NAME).read_text()
        assert text == RunManifest.load(tmp_path / MANIFEST_NAME).model_dump_json(indent=2) + "\n"
        assert json.loads(text)["command"] == "analytic"

    def test_reference_peak_time(self, tmp_path):
        argv = ["analytic", "--preset", "paper-table1-1", "--grid", "0:0.1:1e-4"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_OK
        df = pd.read_csv(tmp_path / "none_curve.csv")
        assert df["time_s"][df["expected_count"].idxmax()] == pytest.approx(0.0417, abs=1e-4)

    def test_byte_identical_reruns(self, tmp_path):
        for run in ("a", "b"):
            argv = ["analytic", "--preset", "desk-enzyme", "--out", str(tmp_path / run)]
            assert main(argv) == EXIT_OK
        first = (tmp_path / "a" / "enzyme_curve.csv").read_bytes()
        assert first == (tmp_path / "b" / "enzyme_curve.csv").read_bytes()

    def test_scenario_override(self, tmp_path):
        argv = ["analytic", "--preset", "desk-photolysis", "--scenario", "none"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "none_curve.csv").exists()

    def test_light_sweep(self, tmp_path):
        argv = ["analytic", "--preset", "desk-photolysis", "--light-sweep", "0.02:0.08:0.02"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_OK
        sweep = pd.read_csv(tmp_path / "light_sweep.csv")
        assert len(sweep) == 4

    def test_empty_grid(self, tmp_path):
        argv = ["analytic", "--preset", "desk-none", "--grid", "0.5:0.1:0.01"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_BAD_ARGUMENTS

    @pytest.mark.parametrize("flag", ["--grid", "--light-sweep"])
    def test_empty_grid_string(self, tmp_path, flag):
        argv = ["analytic", "--preset", "desk-photolysis", flag, ""]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_BAD_ARGUMENTS

    def test_unknown_preset(self, tmp_path):
        assert main(["analytic", "--preset", "nope", "--out", str(tmp_path)]) == EXIT_BAD_ARGUMENTS

    def test_two_configs_rejected(self, tmp_path):
        argv = ["analytic", "--preset", "desk-none", "--preset", "desk-enzyme"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_BAD_ARGUMENTS

    def test_invalid_config(self, tmp_path):
        path = _write_config(tmp_path)
        path.write_text(path.read_text().replace('timestep_dt = "50 us"', "timestep_dt = 0"))
        argv = ["analytic", "--config", str(path), "--out", str(tmp_path / "out")]
        assert main(argv) == EXIT_CONFIG_INVALID

    def test_unparseable_config(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("name = \n")
        argv = ["analytic", "--config", str(path), "--out", str(tmp_path / "out")]
        assert main(argv) == EXIT_CONFIG_INVALID

    def test_output_failure(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory")
        argv = ["analytic", "--preset", "desk-none", "--out", str(blocker / "sub")]
        assert main(argv) == EXIT_IO_FAILURE


class TestSimulateCommand:
    def test_writes_repetitions_and_aggregate(self, tmp_path):
        config = _write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert (out / "reps" / "none_11_0.csv").exists()
        assert (out / "reps" / "none_11_1.csv").exists()
        agg = pd.read_csv(out / "none_aggregate.csv")
        assert list(agg.columns) == ["time_s", "mean", "std", "ci99_low", "ci99_high"]
        assert len(agg) == 31
        assert RunManifest.load(out / MANIFEST_NAME).verify(out) == []

    def test_seed_override(self, tmp_path):
        config = _write_config(tmp_path)
        argv = ["simulate", "--config", str(config), "--seed", "99", "--out", str(tmp_path / "o")]
        assert main(argv) == EXIT_OK
        assert (tmp_path / "o" / "reps" / "none_99_0.csv").exists()
        manifest = json.loads((tmp_path / "o" / MANIFEST_NAME).read_text())
        assert manifest["master_seed"] == 99

    def test_zero_molecules(self, tmp_path):
        config = _write_config(tmp_path, molecules=0, repetitions=1)
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(config), "--out", str(out)]) == EXIT_OK
        agg = pd.read_csv(out / "none_aggregate.csv")
        assert (agg["mean"] == 0).all()
        assert (agg["std"] == 0).all()

    def test_byte_identical_reruns(self, tmp_path):
        config = _write_config(tmp_path, scenario="photolysis")
        for run in ("a", "b"):
            argv = ["simulate", "--config", str(config), "--out", str(tmp_path / run)]
            assert main(argv) == EXIT_OK
        name = "photolysis_aggregate.csv"
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_worker_count_is_irrelevant(self, tmp_path):
        config = _write_config(tmp_path, molecules=500, repetitions=8, scenario="photolysis")
        outputs = {}
        for workers in (1, 4, 8):
            out = tmp_path / f"w{workers}"
            argv = ["simulate", "--config", str(config), "--workers", str(workers)]
            assert main([*argv, "--out", str(out)]) == EXIT_OK
            outputs[workers] = {
                p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*.csv"))
            }
        assert len(outputs[1]) == 9
        assert outputs[4] == outputs[1]
        assert outputs[8] == outputs[1]

    def test_budget_exceeded(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("MAX_PARTICLE_STEPS", "1000")
        reset_settings()
        config = _write_config(tmp_path)
        argv = ["simulate", "--config", str(config), "--out", str(tmp_path / "out")]
        assert main(argv) == EXIT_BUDGET_EXCEEDED
        assert "simulation.timestep_dt" in capsys.readouterr().err

    def test_reference_preset_exceeds_default_budget(self, tmp_path):
        argv = ["simulate", "--preset", "paper-table1-1", "--out", str(tmp_path)]
        assert main(argv) == EXIT_BUDGET_EXCEEDED

    def test_bad_seed(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["simulate", "--preset", "desk-none", "--seed", "-1"])
        assert info.value.code == EXIT_BAD_ARGUMENTS


class TestMetricsCommand:
    @pytest.fixture
    def curve(self, tmp_path) -> Path:
        assert main(["analytic", "--preset", "desk-none", "--out", str(tmp_path / "a")]) == 0
        return tmp_path / "a" / "none_curve.csv"

    def test_tables(self, tmp_path, curve):
        out = tmp_path / "m"
        argv = ["metrics", str(curve), "--preset", "desk-none", "--out", str(out)]
        assert main(argv) == EXIT_OK
        itr = pd.read_csv(out / "itr.csv")
        assert list(itr.columns) == ["scenario", "t_s", "t_end", "itr"]
        assert 0.0 < itr["itr"].iloc[0] < 1.0
        sweep = pd.read_csv(out / "pe_sweep.csv")
        assert set(sweep["method"]) == {"binomial", "poisson", "gaussian", "gaussian-as-printed"}

    def test_binomial_skipped_without_molecule_count(self, tmp_path, curve):
        out = tmp_path / "m"
        assert main(["metrics", str(curve), "--ts", "0.1", "--out", str(out)]) == EXIT_OK
        assert set(pd.read_csv(out / "pe_sweep.csv")["method"]) == {
            "poisson",
            "gaussian",
            "gaussian-as-printed",
        }

    def test_zero_threshold_always_detects(self, tmp_path, curve):
        out = tmp_path / "m"
        argv = ["metrics", str(curve), "--preset", "desk-none", "--zeta", "0", "--out", str(out)]
        assert main(argv) == EXIT_OK
        sweep = pd.read_csv(out / "pe_sweep.csv")
        assert len(sweep) == 4
        tails = sweep.set_index("method")["p_detect"]
        assert (tails.drop("gaussian-as-printed") == 1.0).all()
        assert tails["gaussian-as-printed"] < 1e-3

    def test_both_gaussian_forms_emitted(self, tmp_path, curve):
        out = tmp_path / "m"
        argv = ["metrics", str(curve), "--preset", "desk-none", "--zeta", "1:40"]
        assert main([*argv, "--method", "all", "--out", str(out)]) == EXIT_OK
        sweep = pd.read_csv(out / "pe_sweep.csv")
        upper = sweep[sweep["method"] == "gaussian"].set_index("zeta")["p_detect"]
        printed = sweep[sweep["method"] == "gaussian-as-printed"].set_index("zeta")["p_detect"]
        assert len(upper) == len(printed) == 40
        np.testing.assert_allclose(upper + printed, 1.0, atol=1e-8)
        assert upper.is_monotonic_decreasing
        assert printed.is_monotonic_increasing

    def test_all_arrivals_before_symbol_end(self, tmp_path):
        series = tmp_path / "early.csv"
        series.write_text("time_s,count\n0,0\n0.05,3\n0.1,0\n0.15,0\n0.2,0\n")
        out = tmp_path / "m"
        assert main(["metrics", str(series), "--ts", "0.1", "--out", str(out)]) == EXIT_OK
        assert pd.read_csv(out / "itr.csv")["itr"].iloc[0] == 0.0

    def test_symbol_period_beyond_series(self, tmp_path, curve):
        argv = ["metrics", str(curve), "--ts", "2.0", "--out", str(tmp_path / "m")]
        assert main(argv) == EXIT_BAD_ARGUMENTS

    def test_missing_input(self, tmp_path):
        argv = ["metrics", str(tmp_path / "absent.csv"), "--ts", "0.1"]
        assert main([*argv, "--out", str(tmp_path / "m")]) == EXIT_BAD_ARGUMENTS

    def test_aggregate_input(self, tmp_path):
        config = _write_config(tmp_path)
        assert main(["simulate", "--config", str(config), "--out", str(tmp_path / "s")]) == 0
        out = tmp_path / "m"
        argv = ["metrics", str(tmp_path / "s" / "none_aggregate.csv"), "--config", str(config)]
        assert main([*argv, "--out", str(out)]) == EXIT_OK
        assert pd.read_csv(out / "itr.csv")["scenario"].iloc[0] == "none_aggregate"


class TestCompareCommand:
    def test_identical_configs_identical_rows(self, tmp_path):
        argv = ["compare", "--preset", "desk-none", "--preset", "desk-none"]
        assert main([*argv, "--preset", "desk-none", "--out", str(tmp_path)]) == EXIT_OK
        table = pd.read_csv(tmp_path / "compare.csv")
        assert len(table) == 3
        assert (table.nunique() == 1).all()
        assert table["amplitude_ratio"].iloc[0] == 1.0

    def test_desk_presets(self, tmp_path):
        argv = ["compare", "--preset", "desk-none", "--preset", "desk-enzyme"]
        assert main([*argv, "--preset", "desk-photolysis", "--out", str(tmp_path)]) == EXIT_OK
        table = pd.read_csv(tmp_path / "compare.csv").set_index("scenario")
        assert table.loc["enzyme", "amplitude_ratio"] == pytest.approx(0.64, abs=0.10)
        assert table.loc["photolysis", "itr"] < table.loc["none", "itr"]
        assert table.loc["photolysis", "min_pe"] <= table.loc["enzyme", "min_pe"]
        sweep = pd.read_csv(tmp_path / "pe_sweep.csv")
        assert set(sweep["scenario"]) == {"none", "enzyme", "photolysis"}

    def test_mismatched_geometry(self, tmp_path):
        argv = ["compare", "--preset", "desk-none", "--preset", "paper-table1-1"]
        assert main([*argv, "--out", str(tmp_path)]) == EXIT_BAD_ARGUMENTS

    def test_simulated_source(self, tmp_path):
        none = _write_config(tmp_path)
        photo = _write_config(tmp_path, scenario="photolysis")
        argv = ["compare", "--source", "simulate", "--config", str(none), "--config", str(photo)]
        assert main([*argv, "--out", str(tmp_path / "c")]) == EXIT_OK
        table = pd.read_csv(tmp_path / "c" / "compare.csv")
        assert list(table["scenario"]) == ["none", "photolysis"]
        assert (tmp_path / "c" / "photolysis_small_aggregate.csv").exists()
        sweep = pd.read_csv(tmp_path / "c" / "pe_sweep.csv")
        assert "empirical" in set(sweep["method"])
