"""CSV artifacts with a fixed column order and 9 significant digits.

File layout inside an output directory:

    analytic:  {scenario}_curve.csv            time_s, expected_count
               light_sweep.csv                 light_time_s, peak_count, count_at_light_time, itr
    simulate:  reps/{scenario}_{seed}_{rep}.csv time_s, count
               {scenario}_aggregate.csv        time_s, mean, std, ci99_low, ci99_high
    metrics:   itr.csv                         scenario, t_s, t_end, itr
               pe_sweep.csv                    zeta, method, p_detect, p_error, scenario
    compare:   compare.csv                     see COMPARE_COLUMNS
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from analytics.impulse_response import ImpulseCurve
from errors import OutputError
from simulation.statistics import AggregatedSeries, ObservationSeries

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

CURVE_COLUMNS = ["time_s", "expected_count"]
SERIES_COLUMNS = ["time_s", "count"]
AGGREGATE_COLUMNS = ["time_s", "mean", "std", "ci99_low", "ci99_high"]
ITR_COLUMNS = ["scenario", "t_s", "t_end", "itr"]
COMPARE_COLUMNS = [
    "scenario",
    "name",
    "peak_mean",
    "peak_time_s",
    "amplitude_ratio",
    "itr",
    "min_pe",
    "argmin_zeta",
]


def series_filename(scenario: str, seed: int, repetition: int) -> str:
    """Per-repetition file name ``{scenario}_{seed}_{rep}.csv``."""
    return f"{scenario}_{seed}_{repetition}.csv"


def write_frame(df: pd.DataFrame, path: Path) -> Path:
    """Write a frame with the shared float rendering.

    Raises:
        OutputError: If the file cannot be written.
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    logger.debug("Wrote %s (%d rows)", path, len(df))
    return path


def write_curve(curve: ImpulseCurve, path: Path) -> Path:
    df = pd.DataFrame({"time_s": curve.times, "expected_count": curve.expected_counts})
    return write_frame(df[CURVE_COLUMNS], path)


def write_series(series: ObservationSeries, path: Path) -> Path:
    df = pd.DataFrame({"time_s": series.sample_times, "count": series.counts})
    return write_frame(df[SERIES_COLUMNS], path)


def write_aggregate(agg: AggregatedSeries, path: Path) -> Path:
    df = pd.DataFrame(
        {
            "time_s": agg.sample_times,
            "mean": agg.mean,
            "std": agg.std,
            "ci99_low": agg.ci99_low,
            "ci99_high": agg.ci99_high,
        }
    )
    return write_frame(df[AGGREGATE_COLUMNS], path)


@dataclass(frozen=True)
class LoadedSeries:
    """A time series read back from any of the curve, series or aggregate files."""

    times: np.ndarray
    values: np.ndarray
    kind: str  # "expected_count", "mean" or "count"
    label: str

    @property
    def is_analytic(self) -> bool:
        return self.kind == "expected_count"


def read_series(path: Path) -> LoadedSeries:
    """Read an emitted curve, per-repetition or aggregate CSV.

    Raises:
        FileNotFoundError: If the file doesn't exist.
        OutputError: If the file lacks a recognized value column.
    """
    if not path.exists():
        raise FileNotFoundError(f"Input series not found: {path}")
    try:
        df = pd.read_csv(path)
    except (OSError, ValueError) as exc:
        raise OutputError(f"Cannot read {path}: {exc}") from exc
    if "time_s" not in df.columns:
        raise OutputError(f"{path.name} has no time_s column")
    for kind in ("expected_count", "mean", "count"):
        if kind in df.columns:
            return LoadedSeries(
                times=df["time_s"].to_numpy(dtype=float),
                values=df[kind].to_numpy(dtype=float),
                kind=kind,
                label=path.stem,
            )
    raise OutputError(f"{path.name} has none of the columns expected_count, mean, count")
