"""Threshold detector and the probability that it fires.

The receiver decides bit 1 when the count at the evaluation time reaches the
threshold zeta. Pr(S >= zeta) is modeled three ways: exactly (binomial over N
molecules, each inside with probability P_S), Poisson with mean N * P_S, and a
Gaussian with mean N * P_S and variance N * P_S * (1 - P_S). Sums run in log
space through ``scipy.special.gammaln`` so N up to 1e6 stays finite.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.special import erf, erfc, gammaln, logsumexp, xlogy

from analytics.impulse_response import expected_count_photolysis
from errors import DomainError
from scenario.models import ScenarioConfig
from scenario.resolve import resolve

logger = logging.getLogger(__name__)


class GaussianTail(str, Enum):
    """Form of the Gaussian detection probability."""

    UPPER = "upper"  # Pr(S >= zeta) = 1/2 erfc((zeta - m) / sqrt(2 var))
    AS_PRINTED = "as-printed"  # 1/2 [1 + erf((zeta - m) / sqrt(2 var))], the lower tail


class SingleMoleculeProbability(NamedTuple):
    value: float
    clamped: bool


def detect_bit(count: int, zeta: float) -> int:
    """Threshold decision: 1 if count >= zeta, else 0."""
    return 1 if count >= zeta else 0


def single_molecule_prob(t: float, config: ScenarioConfig) -> SingleMoleculeProbability:
    """Probability that one released molecule is inside the receiver at time t.

    This is the photolysis expected count for N = 1. The point-observer
    formula can exceed 1 for large receivers at small t; the value is then
    clamped to 1 and flagged.

    Args:
        t: Time since release in seconds, >= 0.
        config: Scenario supplying geometry, D, J, T_op and the continuity mode.

    Returns:
        The probability and whether it was clamped.
    """
    resolved = resolve(config)
    raw = float(
        expected_count_photolysis(
            t,
            config.geometry,
            config.environment,
            1,
            resolved.rate_j,
            resolved.light_time,
            resolved.continuity_mode,
        )
    )
    if raw > 1.0:
        logger.warning(
            "Single-molecule probability %.4g at t=%.4g s exceeds 1; clamped "
            "(point-observer model breaks down for this geometry)",
            raw,
            t,
        )
        return SingleMoleculeProbability(value=1.0, clamped=True)
    return SingleMoleculeProbability(value=max(raw, 0.0), clamped=False)


def prob_detect_binomial(n: int, p: float, zeta: float) -> float:
    """Pr(S >= zeta) for S ~ Binomial(n, p).

    Raises:
        DomainError: If p lies outside [0, 1] or n < 0.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("p", f"must lie in [0, 1], got {p!r}")
    if n < 0:
        raise DomainError("N", f"must be >= 0, got {n!r}")
    first = max(math.ceil(zeta), 0)
    if first == 0:
        return 1.0
    if first > n:
        return 0.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    q = np.arange(first, n + 1, dtype=float)
    log_terms = (
        gammaln(n + 1.0)
        - gammaln(q + 1.0)
        - gammaln(n - q + 1.0)
        + q * math.log(p)
        + (n - q) * math.log1p(-p)
    )
    return float(min(1.0, math.exp(logsumexp(log_terms))))


def prob_detect_poisson(mean: float, zeta: float) -> float:
    """Pr(S >= zeta) for S ~ Poisson(mean).

    Raises:
        DomainError: If mean < 0.
    """
    if mean < 0:
        raise DomainError("mean", f"must be >= 0, got {mean!r}")
    first = max(math.ceil(zeta), 0)
    if first == 0:
        return 1.0
    if mean == 0:
        return 0.0
    q = np.arange(first, dtype=float)
    log_cdf = logsumexp(xlogy(q, mean) - mean - gammaln(q + 1.0))
    return float(min(1.0, max(0.0, -math.expm1(log_cdf))))


def prob_detect_gaussian(
    mean: float, variance: float, zeta: float, mode: GaussianTail = GaussianTail.UPPER
) -> float:
    """Gaussian approximation of the detection probability.

    Raises:
        DomainError: If variance <= 0.
    """
    if not variance > 0:
        raise DomainError("variance", f"must be > 0, got {variance!r}")
    z = (zeta - mean) / math.sqrt(2.0 * variance)
    if mode is GaussianTail.AS_PRINTED:
        return float(0.5 * (1.0 + erf(z)))
    return float(0.5 * erfc(z))


def bit_error_probability(p_detect: float, p1: float) -> float:
    """Pe = P1 * (1 - Pr(S >= zeta)); only missed ones are counted."""
    return p1 * (1.0 - p_detect)
