"""Per-repetition observation series and their cross-repetition summary."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

from errors import DomainError

logger = logging.getLogger(__name__)

# Two-sided 99% normal quantile, about 2.576
CI99_Z = float(stats.norm.ppf(0.995))


@dataclass(frozen=True)
class ObservationSeries:
    """Receiver counts of one repetition on the sample grid."""

    sample_times: np.ndarray
    counts: np.ndarray
    repetition_index: int
    seed_used: int

    def count_at(self, t: float) -> int:
        """Count at the sample nearest to t."""
        return int(self.counts[int(np.argmin(np.abs(self.sample_times - t)))])


@dataclass(frozen=True)
class AggregatedSeries:
    """Pointwise mean, sample std and 99% confidence band over repetitions."""

    sample_times: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    ci99_low: np.ndarray
    ci99_high: np.ndarray
    repetitions: int

    @property
    def sem(self) -> np.ndarray:
        """Standard error of the mean."""
        return self.std / np.sqrt(self.repetitions)

    @property
    def peak_index(self) -> int:
        return int(np.argmax(self.mean))

    @property
    def peak_time(self) -> float:
        return float(self.sample_times[self.peak_index])

    @property
    def peak_mean(self) -> float:
        return float(self.mean[self.peak_index])

    def at(self, t: float) -> float:
        """Linear interpolation of the mean at time t."""
        return float(np.interp(t, self.sample_times, self.mean))


def aggregate(series: Sequence[ObservationSeries]) -> AggregatedSeries:
    """Combine repetitions into mean, std (n - 1) and mean +- 2.576 * std / sqrt(n).

    Raises:
        DomainError: If no series are given or their sample grids differ.
    """
    if not series:
        raise DomainError("series", "at least one observation series is required")
    times = series[0].sample_times
    for s in series[1:]:
        if s.sample_times.shape != times.shape or not np.array_equal(s.sample_times, times):
            raise DomainError(
                "series", f"repetition {s.repetition_index} uses a different sample grid"
            )
    counts = np.vstack([s.counts for s in series]).astype(float)
    n = counts.shape[0]
    mean = counts.mean(axis=0)
    std = counts.std(axis=0, ddof=1) if n > 1 else np.zeros_like(mean)
    half_width = CI99_Z * std / np.sqrt(n)
    logger.debug("Aggregated %d repetitions over %d samples", n, times.size)
    return AggregatedSeries(
        sample_times=times.copy(),
        mean=mean,
        std=std,
        ci99_low=mean - half_width,
        ci99_high=mean + half_width,
        repetitions=n,
    )
