"""The four pipelines behind the CLI subcommands.

Each command takes parsed scenarios and an output directory, writes its CSV
artifacts plus ``manifest.json`` and returns a short text summary. Commands
raise the ``errors`` hierarchy; exit-code mapping is the CLI's job.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from analytics.impulse_response import impulse_curve, light_time_sweep
from detection.itr import CumulativeCounts, itr
from detection.sweep import (
    ANALYTIC_METHODS,
    Method,
    default_zeta_range,
    empirical_detection,
    threshold_sweep,
)
from errors import ConfigInvalidError, DomainError
from runner.exporter import (
    COMPARE_COLUMNS,
    ITR_COLUMNS,
    read_series,
    series_filename,
    write_aggregate,
    write_curve,
    write_frame,
    write_series,
)
from runner.manifest import RunManifest
from scenario.models import Scenario, ScenarioConfig
from scenario.resolve import ResolvedScenario, resolve
from scenario.validation import validate
from simulation.engine import run_repetitions
from simulation.statistics import aggregate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    manifest: RunManifest
    summary: str


def ensure_valid(config: ScenarioConfig) -> ResolvedScenario:
    """Validate and resolve a scenario.

    Raises:
        ConfigInvalidError: If ``validate`` reports any violation.
    """
    violations = validate(config)
    if violations:
        raise ConfigInvalidError(violations)
    return resolve(config)


def _manifest(command: str, configs: Sequence[ScenarioConfig], **arguments: object) -> RunManifest:
    resolved = [resolve(c) for c in configs]
    return RunManifest(
        command=command,
        master_seed=resolved[0].master_seed if resolved else None,
        configs=[c.model_dump(mode="json") for c in configs],
        resolved=[r.as_dict() for r in resolved],
        arguments={k: v for k, v in arguments.items() if v is not None},
    )


def cmd_analytic(
    config: ScenarioConfig,
    out_dir: Path,
    *,
    scenario: Scenario | None = None,
    grid: np.ndarray | None = None,
    light_times: np.ndarray | None = None,
) -> CommandResult:
    """Write the closed-form impulse curve (and optionally a light-time sweep).

    Args:
        config: Scenario to evaluate.
        out_dir: Output directory.
        scenario: Overrides the scenario named in the config.
        grid: Time grid; defaults to the config's sample grid.
        light_times: Candidate light activation times for light_sweep.csv.

    Raises:
        ConfigInvalidError: If the config is invalid.
        DomainError: On an empty or malformed grid.
    """
    started = time.perf_counter()
    resolved = ensure_valid(config)
    scenario = scenario or config.scenario
    times = resolved.sample_times() if grid is None else grid
    curve = impulse_curve(scenario, config, times)

    manifest = _manifest(
        "analytic",
        [config],
        scenario=scenario.value,
        grid=None if grid is None else [float(times[0]), float(times[-1]), int(len(times))],
        light_times=None if light_times is None else [float(t) for t in light_times],
    )
    manifest.record(write_curve(curve, out_dir / f"{scenario.value}_curve.csv"), out_dir)
    lines = [
        f"{config.name} [{scenario.value}]: peak {curve.peak_count:.4g} molecules "
        f"at t = {curve.peak_time:.4g} s (T_op = {resolved.light_time:.4g} s)"
    ]

    if light_times is not None:
        sweep = light_time_sweep(
            config, light_times, t_s=resolved.symbol_period, t_end=resolved.duration
        )
        manifest.record(write_frame(sweep, out_dir / "light_sweep.csv"), out_dir)
        best = sweep.loc[sweep["itr"].idxmin()]
        lines.append(
            f"light sweep: lowest ITR {best['itr']:.4g} at light time {best['light_time_s']:.4g} s"
        )

    manifest.record_timing("total", started)
    manifest.write(out_dir)
    return CommandResult(manifest=manifest, summary="\n".join(lines))


def cmd_simulate(
    config: ScenarioConfig, out_dir: Path, *, workers: int | None = None
) -> CommandResult:
    """Run every repetition, write per-repetition and aggregated series.

    Raises:
        ConfigInvalidError: If the config is invalid.
        BudgetExceededError: If the run exceeds the particle-step ceiling.
    """
    started = time.perf_counter()
    resolved = ensure_valid(config)
    series = run_repetitions(config, workers)
    manifest = _manifest("simulate", [config], workers=workers)
    manifest.record_timing("simulation", started)

    label = resolved.scenario.value
    for s in series:
        path = out_dir / "reps" / series_filename(label, s.seed_used, s.repetition_index)
        manifest.record(write_series(s, path), out_dir)
    agg = aggregate(series)
    manifest.record(write_aggregate(agg, out_dir / f"{label}_aggregate.csv"), out_dir)
    manifest.record_timing("total", started)
    manifest.write(out_dir)

    i = agg.peak_index
    summary = (
        f"{config.name} [{label}]: {agg.repetitions} repetitions, peak mean "
        f"{agg.peak_mean:.4g} (99% CI {agg.ci99_low[i]:.4g}..{agg.ci99_high[i]:.4g}) "
        f"at t = {agg.peak_time:.4g} s"
    )
    return CommandResult(manifest=manifest, summary=summary)


def cmd_metrics(
    inputs: Sequence[Path],
    out_dir: Path,
    *,
    t_s: float,
    zeta_range: Iterable[int] | None = None,
    methods: Sequence[Method] = ANALYTIC_METHODS,
    p1: float = 0.5,
    molecules: int | None = None,
    eval_time: float | None = None,
) -> CommandResult:
    """ITR and Pe-vs-zeta tables for emitted curve or aggregate CSVs.

    Args:
        inputs: Curve (analytic), aggregate or per-repetition CSV files.
        out_dir: Output directory.
        t_s: Symbol period in seconds.
        zeta_range: Thresholds; defaults to 1 .. ceil(2 * mean) + 5 per input.
        methods: Tail models to evaluate.
        p1: A-priori probability of bit 1.
        molecules: Released molecules N; the binomial model is skipped without it.
        eval_time: Detector sampling time; defaults to each input's peak time.

    Raises:
        DomainError: If t_s lies beyond the end of a series.
        UndefinedMetricError: If a series never registers a molecule.
    """
    started = time.perf_counter()
    manifest = RunManifest(
        command="metrics",
        arguments={
            "inputs": [str(p) for p in inputs],
            "t_s": t_s,
            "methods": [m.value for m in methods],
            "p1": p1,
            "molecules": molecules,
            "eval_time": eval_time,
        },
    )
    if zeta_range is not None:
        zeta_range = list(zeta_range)
        manifest.arguments["zeta"] = [zeta_range[0], zeta_range[-1]] if zeta_range else []
    itr_rows = []
    sweeps = []
    lines = []
    for path in inputs:
        loaded = read_series(path)
        if t_s > loaded.times[-1]:
            raise DomainError(
                "t_s", f"{t_s!r} s lies beyond the end of {path.name} ({loaded.times[-1]:.9g} s)"
            )
        cumulative = (
            CumulativeCounts.integrate(loaded.times, loaded.values)
            if loaded.is_analytic
            else CumulativeCounts.from_counts(loaded.times, loaded.values)
        )
        value = itr(cumulative, t_s)
        itr_rows.append(
            {"scenario": loaded.label, "t_s": value.t_s, "t_end": value.t_end, "itr": value.value}
        )

        peak_time = float(loaded.times[np.argmax(loaded.values)])
        t_eval = eval_time if eval_time is not None else peak_time
        mean = float(np.interp(t_eval, loaded.times, loaded.values))
        zetas = list(zeta_range) if zeta_range is not None else list(default_zeta_range(mean))
        line = f"{loaded.label}: ITR {value.value:.4g}"
        for method in methods:
            if method is Method.BINOMIAL and molecules is None:
                logger.warning("Skipping binomial model for %s: N unknown", loaded.label)
                continue
            sweep = threshold_sweep(
                mean, zetas, method, p1, t_eval, molecules=molecules, scenario=loaded.label
            )
            sweeps.append(sweep.to_frame())
            best = sweep.best
            line += f", {method.value} min Pe {best.p_error:.3g} at zeta={best.threshold_zeta}"
        lines.append(line)

    manifest.record(
        write_frame(pd.DataFrame(itr_rows, columns=ITR_COLUMNS), out_dir / "itr.csv"), out_dir
    )
    if sweeps:
        pe = pd.concat(sweeps, ignore_index=True)
        manifest.record(write_frame(pe, out_dir / "pe_sweep.csv"), out_dir)
    manifest.record_timing("total", started)
    manifest.write(out_dir)
    return CommandResult(manifest=manifest, summary="\n".join(lines))


def _check_comparable(resolved: Sequence[ResolvedScenario]) -> None:
    first = resolved[0]
    for r in resolved[1:]:
        for attr in ("distance", "receiver_radius", "molecules"):
            if getattr(r, attr) != getattr(first, attr):
                raise DomainError(
                    "geometry",
                    f"'{r.name}' and '{first.name}' differ in {attr} "
                    f"({getattr(r, attr)!r} vs {getattr(first, attr)!r})",
                )


def cmd_compare(
    configs: Sequence[ScenarioConfig],
    out_dir: Path,
    *,
    source: str = "analytic",
    workers: int | None = None,
    t_s: float | None = None,
    zeta_range: Iterable[int] | None = None,
    method: Method = Method.POISSON,
) -> CommandResult:
    """Side-by-side summary of scenarios sharing geometry and N.

    Per scenario: peak mean and time, amplitude ratio against the no-reaction
    row (the first row if there is none), ITR at t_s, and the minimum Pe with
    its threshold when sampling at each scenario's light time. With
    ``source="simulate"`` the curves are aggregated Monte Carlo means and an
    empirical Pe sweep is added to pe_sweep.csv.

    Raises:
        ConfigInvalidError: If any config is invalid.
        DomainError: If the scenarios differ in geometry or N.
    """
    if source not in ("analytic", "simulate"):
        raise DomainError("source", f"expected 'analytic' or 'simulate', got {source!r}")
    if not configs:
        raise DomainError("configs", "at least one scenario is required")
    started = time.perf_counter()
    resolved = [ensure_valid(c) for c in configs]
    _check_comparable(resolved)
    manifest = _manifest("compare", configs, source=source, workers=workers, t_s=t_s)

    curves = []
    sweeps = []
    for config, res in zip(configs, resolved, strict=True):
        label = res.scenario.value
        if source == "analytic":
            curve = impulse_curve(label, config, res.sample_times())
            times, values = curve.times, curve.expected_counts
            cumulative = CumulativeCounts.from_curve(curve)
            counts_at_eval = None
        else:
            series = run_repetitions(config, workers)
            agg = aggregate(series)
            manifest.record(
                write_aggregate(agg, out_dir / f"{label}_{config.name}_aggregate.csv"), out_dir
            )
            times, values = agg.sample_times, agg.mean
            cumulative = CumulativeCounts.from_counts(times, values)
            counts_at_eval = [s.count_at(res.light_time) for s in series]
        curves.append((config, res, times, values, cumulative, counts_at_eval))

    mean_at_eval = [float(np.interp(r.light_time, t, v)) for _, r, t, v, _, _ in curves]
    zetas = (
        list(zeta_range) if zeta_range is not None else list(default_zeta_range(max(mean_at_eval)))
    )
    reference = next(
        (i for i, (_, r, *_) in enumerate(curves) if r.scenario is Scenario.NONE), 0
    )
    reference_peak = float(np.max(curves[reference][3]))

    rows = []
    for (config, res, times, values, cumulative, counts_at_eval), mean in zip(
        curves, mean_at_eval, strict=True
    ):
        label = res.scenario.value
        peak = int(np.argmax(values))
        sweep = threshold_sweep(
            mean, zetas, method, res.p1, res.light_time, molecules=res.molecules, scenario=label
        )
        sweeps.append(sweep.to_frame())
        if counts_at_eval is not None:
            sweeps.append(
                empirical_detection(
                    counts_at_eval, zetas, res.p1, res.light_time, scenario=label
                ).to_frame()
            )
        symbol = t_s if t_s is not None else res.symbol_period
        rows.append(
            {
                "scenario": label,
                "name": config.name,
                "peak_mean": float(values[peak]),
                "peak_time_s": float(times[peak]),
                "amplitude_ratio": float(values[peak]) / reference_peak
                if reference_peak > 0
                else float("nan"),
                "itr": itr(cumulative, symbol).value,
                "min_pe": sweep.best.p_error,
                "argmin_zeta": sweep.best.threshold_zeta,
            }
        )

    table = pd.DataFrame(rows, columns=COMPARE_COLUMNS)
    manifest.record(write_frame(table, out_dir / "compare.csv"), out_dir)
    manifest.record(
        write_frame(pd.concat(sweeps, ignore_index=True), out_dir / "pe_sweep.csv"), out_dir
    )
    manifest.record_timing("total", started)
    manifest.write(out_dir)
    return CommandResult(manifest=manifest, summary=table.to_string(index=False))
