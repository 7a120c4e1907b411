"""
Statistical checks for the samplers: chi-square uniformity over small
enumerable spaces, canonical forms of the sampled objects, and Monte-Carlo
frequencies used by the oracle regression report.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np
from scipy import stats

from .graph import VertexPath
from .samplers import (
    Configuration,
    RandomSource,
    is_simple_configuration,
    sample_configuration,
    sample_hamilton_cycle,
    sample_hamilton_plus_matching,
    sample_perfect_matching,
    xrange_half_width,
)


@dataclass(frozen=True)
class ChiSquareResult:
    """Goodness of fit against the uniform law on ``support_size`` outcomes."""

    statistic: float
    p_value: float
    support_size: int
    draws: int
    observed_outcomes: int

    def passes(self, significance: float) -> bool:
        """True unless uniformity is rejected at ``significance``.

        Seeing more distinct outcomes than the support holds is a failure.
        """
        if self.observed_outcomes > self.support_size:
            return False
        return self.p_value >= significance


def chi_square_uniformity(
    counts: Iterable[int], support_size: int
) -> ChiSquareResult:
    """Chi-square test of observed ``counts`` (unseen outcomes padded with 0)."""
    observed = [int(c) for c in counts]
    outcomes = len(observed)
    if outcomes < support_size:
        observed.extend([0] * (support_size - outcomes))
    frequencies = np.asarray(observed, dtype=float)
    statistic, p_value = stats.chisquare(frequencies)
    return ChiSquareResult(
        statistic=float(statistic),
        p_value=float(p_value),
        support_size=support_size,
        draws=int(frequencies.sum()),
        observed_outcomes=outcomes,
    )


def canonical_matching(mate: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Perfect matching as its sorted edge tuple."""
    return tuple((v, w) for v, w in enumerate(mate) if v < w)


def canonical_configuration(c: Configuration) -> tuple[tuple[int, int], ...]:
    """Configuration as its sorted point-pair tuple."""
    return c.canonical()


def canonical_cycle(cycle: VertexPath) -> tuple[int, ...]:
    """Rotation to start at the smallest vertex, then the smaller direction."""
    order = list(cycle.vertices)
    start = order.index(min(order))
    rotated = order[start:] + order[:start]
    reverse = [rotated[0]] + rotated[1:][::-1]
    return tuple(min(rotated, reverse))


def perfect_matching_count(points: int) -> int:
    """(points - 1)!! perfect matchings on an even number of points."""
    return math.prod(range(points - 1, 0, -2)) if points else 1


def hamilton_cycle_count(n: int) -> int:
    """(n - 1)! / 2 undirected Hamilton cycles on ``n >= 3`` vertices."""
    return math.factorial(n - 1) // 2


def sampler_uniformity(
    draw: Callable[[RandomSource], Hashable],
    support_size: int,
    draws: int,
    seed: int,
) -> ChiSquareResult:
    """Draw ``draws`` canonical outcomes from one stream and test uniformity."""
    logger = logging.getLogger(__name__)
    src = RandomSource(seed)
    counts = Counter(draw(src) for _ in range(draws))
    result = chi_square_uniformity(counts.values(), support_size)
    logger.debug(
        "uniformity over %d outcomes: chi2=%.3f p=%.4f",
        support_size,
        result.statistic,
        result.p_value,
    )
    return result


def matching_uniformity(n: int, draws: int, seed: int) -> ChiSquareResult:
    """Uniformity of :func:`sample_perfect_matching` on ``n`` vertices."""
    return sampler_uniformity(
        lambda src: canonical_matching(sample_perfect_matching(n, src)),
        perfect_matching_count(n),
        draws,
        seed,
    )


def cycle_uniformity(n: int, draws: int, seed: int) -> ChiSquareResult:
    """Uniformity of :func:`sample_hamilton_cycle` on ``n`` vertices."""
    return sampler_uniformity(
        lambda src: canonical_cycle(sample_hamilton_cycle(n, src)),
        hamilton_cycle_count(n),
        draws,
        seed,
    )


def hamilton_plus_matching_uniformity(
    n: int, draws: int, seed: int
) -> ChiSquareResult:
    """Uniformity of the Hamilton cycle inside H(n)+G(n,1)."""
    return sampler_uniformity(
        lambda src: canonical_cycle(
            sample_hamilton_plus_matching(n, src).hamilton
        ),
        hamilton_cycle_count(n),
        draws,
        seed,
    )


def configuration_uniformity(
    n: int, r: int, draws: int, seed: int
) -> ChiSquareResult:
    """Uniformity of :func:`sample_configuration`."""
    return sampler_uniformity(
        lambda src: canonical_configuration(sample_configuration(n, r, src)),
        perfect_matching_count(n * r),
        draws,
        seed,
    )


def simple_fraction(n: int, r: int, attempts: int, seed: int) -> float:
    """Fraction of G*(n,r) draws that are simple."""
    src = RandomSource(seed)
    simple = sum(
        is_simple_configuration(sample_configuration(n, r, src))
        for _ in range(attempts)
    )
    return simple / attempts


def xrange_frequency(n: int, trials: int, seed: int) -> float:
    """Fraction of H(n)+G(n,1) draws with |X1| in n/4 +- sqrt(n) ln n."""
    width = xrange_half_width(n)
    hits = 0
    for trial in range(trials):
        instance = sample_hamilton_plus_matching(n, RandomSource(seed, trial))
        hits += abs(len(instance.x1) - n / 4) <= width
    return hits / trials
