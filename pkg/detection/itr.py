"""Interference-to-total-received ratio.

ITR = (F(t_end) - F(t_s)) / F(t_end), where F is the cumulative count seen
by the receiver. Smaller is better: it is the share of arrivals that land in
the next symbol slot.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import cumulative_trapezoid

from errors import DomainError, UndefinedMetricError

if TYPE_CHECKING:
    from analytics.impulse_response import ImpulseCurve

# Relative slack when t lands a rounding error outside the series range
_RANGE_RTOL = 1e-9


@dataclass(frozen=True)
class ItrValue:
    t_s: float
    t_end: float
    value: float


@dataclass(frozen=True)
class CumulativeCounts:
    """Cumulative count F(t) sampled on a grid, linearly interpolated between samples."""

    times: np.ndarray
    totals: np.ndarray

    @classmethod
    def from_counts(cls, times: ArrayLike, counts: ArrayLike) -> CumulativeCounts:
        """Running sum of per-sample receiver observations."""
        t = np.asarray(times, dtype=float)
        c = np.asarray(counts, dtype=float)
        if t.shape != c.shape or t.size == 0:
            raise DomainError("counts", "times and counts must be equal-length, non-empty")
        return cls(times=t, totals=np.cumsum(c))

    @classmethod
    def integrate(cls, times: ArrayLike, expected: ArrayLike) -> CumulativeCounts:
        """Trapezoidal running integral of an expected-count curve."""
        t = np.asarray(times, dtype=float)
        y = np.asarray(expected, dtype=float)
        if t.shape != y.shape or t.size == 0:
            raise DomainError("curve", "times and counts must be equal-length, non-empty")
        return cls(times=t, totals=cumulative_trapezoid(y, t, initial=0.0))

    @classmethod
    def from_curve(cls, curve: ImpulseCurve) -> CumulativeCounts:
        return cls.integrate(curve.times, curve.expected_counts)

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def end(self) -> float:
        return float(self.times[-1])

    def __call__(self, t: float) -> float:
        slack = _RANGE_RTOL * max(abs(self.end), 1.0)
        if t < self.start - slack or t > self.end + slack:
            raise DomainError(
                "t", f"{t!r} s lies outside the series range [{self.start:.9g}, {self.end:.9g}] s"
            )
        return float(np.interp(t, self.times, self.totals))


def itr(
    cumulative: CumulativeCounts | Callable[[float], float],
    t_s: float,
    t_end: float | None = None,
) -> ItrValue:
    """Compute the ITR of a cumulative count.

    Args:
        cumulative: F as a sampled series or any callable of time.
        t_s: Symbol period in seconds.
        t_end: End of the observation window; defaults to the series end.

    Returns:
        The ITR value.

    Raises:
        DomainError: If t_s > t_end or either lies outside the series range.
        UndefinedMetricError: If F(t_end) = 0.
    """
    if t_end is None:
        if not isinstance(cumulative, CumulativeCounts):
            raise DomainError("t_end", "required when F is a plain function")
        t_end = cumulative.end
    if t_s > t_end:
        raise DomainError("t_s", f"symbol period {t_s!r} s exceeds t_end {t_end!r} s")
    total = cumulative(t_end)
    if total == 0:
        raise UndefinedMetricError("F(t_end)", "no molecules received, ITR is undefined")
    value = (total - cumulative(t_s)) / total
    return ItrValue(t_s=float(t_s), t_end=float(t_end), value=float(value))
