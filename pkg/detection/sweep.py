"""Threshold sweeps: bit-error probability per zeta and the best threshold."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from analytics.impulse_response import ImpulseCurve
from detection.probabilities import (
    GaussianTail,
    bit_error_probability,
    prob_detect_binomial,
    prob_detect_gaussian,
    prob_detect_poisson,
)
from errors import DomainError

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["zeta", "method", "p_detect", "p_error", "scenario"]


class Method(str, Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"
    GAUSSIAN = "gaussian"
    GAUSSIAN_AS_PRINTED = "gaussian-as-printed"  # lower-tail form, reported as is
    EMPIRICAL = "empirical"  # fraction of simulated repetitions reaching zeta


ANALYTIC_METHODS = (
    Method.BINOMIAL,
    Method.POISSON,
    Method.GAUSSIAN,
    Method.GAUSSIAN_AS_PRINTED,
)


@dataclass(frozen=True)
class DetectionResult:
    """Detection and error probability at one threshold."""

    threshold_zeta: float
    method: Method
    p_detect: float
    p_error: float
    eval_time: float
    scenario: str = ""


@dataclass(frozen=True)
class SweepResult:
    """Results of one method over a threshold range, in threshold order."""

    results: tuple[DetectionResult, ...]

    @property
    def best(self) -> DetectionResult:
        """Smallest Pe; ties go to the smaller threshold."""
        return min(self.results, key=lambda r: (r.p_error, r.threshold_zeta))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "zeta": r.threshold_zeta,
                    "method": r.method.value,
                    "p_detect": r.p_detect,
                    "p_error": r.p_error,
                    "scenario": r.scenario,
                }
                for r in self.results
            ],
            columns=SWEEP_COLUMNS,
        )


def default_zeta_range(mean: float) -> range:
    """Integer thresholds 1 .. ceil(2 * mean) + 5."""
    return range(1, math.ceil(2.0 * max(mean, 0.0)) + 6)


def _mean_at(source: float | ImpulseCurve, eval_time: float) -> float:
    if isinstance(source, ImpulseCurve):
        return source.at(eval_time)
    return float(source)


def _p_detect(
    method: Method,
    mean: float,
    molecules: int | None,
    zeta: float,
    gaussian_mode: GaussianTail,
) -> float:
    if method is Method.GAUSSIAN_AS_PRINTED:
        method, gaussian_mode = Method.GAUSSIAN, GaussianTail.AS_PRINTED
    elif zeta <= 0:
        # Counts are non-negative
        return 1.0
    p = mean / molecules if molecules else 0.0
    if method is Method.BINOMIAL:
        if molecules is None:
            raise DomainError("molecules", "the binomial method needs the molecule count N")
        return prob_detect_binomial(molecules, min(max(p, 0.0), 1.0), zeta)
    if method is Method.POISSON:
        return prob_detect_poisson(mean, zeta)
    if method is Method.GAUSSIAN:
        variance = mean * (1.0 - p)
        if variance <= 0:
            # Degenerate count: a point mass at the mean
            hit = mean < zeta if gaussian_mode is GaussianTail.AS_PRINTED else mean >= zeta
            return 1.0 if hit else 0.0
        return prob_detect_gaussian(mean, variance, zeta, gaussian_mode)
    raise DomainError("method", f"{method.value} is not an analytic method")


def threshold_sweep(
    source: float | ImpulseCurve,
    zeta_range: Iterable[float],
    method: Method | str,
    p1: float,
    eval_time: float,
    *,
    molecules: int | None = None,
    scenario: str = "",
    gaussian_mode: GaussianTail = GaussianTail.UPPER,
) -> SweepResult:
    """Pe for every threshold under one tail model.

    Args:
        source: Expected count at the evaluation time, or a curve sampled there.
        zeta_range: Thresholds to evaluate.
        method: binomial, poisson, gaussian or gaussian-as-printed. The last
            reports Pr(S < zeta), the complement of the upper Gaussian tail.
        p1: A-priori probability of bit 1.
        eval_time: Sampling time of the detector in seconds.
        molecules: Released molecules N; required by the binomial method and
            used for the Gaussian variance N * P_S * (1 - P_S).
        scenario: Label carried into the results.
        gaussian_mode: Upper tail (default) or the as-printed lower-tail form.

    Returns:
        Results in threshold order.

    Raises:
        DomainError: On an empty threshold range or a negative mean.
    """
    method = Method(method)
    zetas = list(zeta_range)
    if not zetas:
        raise DomainError("zeta", "threshold range is empty")
    mean = _mean_at(source, eval_time)
    if mean < 0:
        raise DomainError("mean", f"must be >= 0, got {mean!r}")
    results = []
    for zeta in zetas:
        p_detect = _p_detect(method, mean, molecules, zeta, gaussian_mode)
        results.append(
            DetectionResult(
                threshold_zeta=zeta,
                method=method,
                p_detect=p_detect,
                p_error=bit_error_probability(p_detect, p1),
                eval_time=eval_time,
                scenario=scenario,
            )
        )
    sweep = SweepResult(results=tuple(results))
    logger.debug(
        "%s sweep (%s): min Pe %.3g at zeta=%s",
        method.value,
        scenario or "-",
        sweep.best.p_error,
        sweep.best.threshold_zeta,
    )
    return sweep


def empirical_detection(
    counts_at_eval: ArrayLike,
    zeta_range: Iterable[float],
    p1: float,
    eval_time: float,
    *,
    scenario: str = "",
) -> SweepResult:
    """Pe from simulated counts: p_detect is the fraction of repetitions with count >= zeta.

    Raises:
        DomainError: If no counts or no thresholds are given.
    """
    counts = np.asarray(counts_at_eval, dtype=float)
    if counts.size == 0:
        raise DomainError("counts", "at least one repetition is required")
    zetas: Sequence[float] = list(zeta_range)
    if not zetas:
        raise DomainError("zeta", "threshold range is empty")
    results = []
    for zeta in zetas:
        p_detect = float(np.mean(counts >= zeta))
        results.append(
            DetectionResult(
                threshold_zeta=zeta,
                method=Method.EMPIRICAL,
                p_detect=p_detect,
                p_error=bit_error_probability(p_detect, p1),
                eval_time=eval_time,
                scenario=scenario,
            )
        )
    return SweepResult(results=tuple(results))
