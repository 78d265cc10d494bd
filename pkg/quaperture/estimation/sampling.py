"""Photon detection events drawn from receiver outcome distributions."""
import logging
import math
from typing import Optional

import numpy

from quaperture.numerics.failures import NumericalFailure
from quaperture.numerics.quadrature import QuadratureSpec, DEFAULT_QUADRATURE
from quaperture.numerics.random import RngStream
from quaperture.receivers.distribution import OutcomeDistribution, ContinuousDistribution

__all__ = ["sample_outcomes", "sample_positions", "kolmogorov_distance", "IncompleteDistributionError",
           "SamplingEnvelopeError"]


#: envelope bins per sigma for rejection sampling of image plane positions
ENVELOPE_RESOLUTION = 8
ENVELOPE_MARGIN = 1.25
_MAX_INFLATIONS = 20


def sample_outcomes(dist: OutcomeDistribution, n_photons: int, rng: RngStream, *,
                    quadrature: QuadratureSpec=DEFAULT_QUADRATURE,
                    logger: Optional[logging.Logger]=None) -> numpy.ndarray:
    """Detection record of n_photons photons.

    Discrete distributions yield counts per outcome (multinomial draw). Continuous image plane distributions yield
    the detected positions, see sample_positions.
    """
    if int(n_photons) != n_photons or n_photons < 0:
        raise ValueError('The photon number must be a non-negative integer', n_photons)
    if isinstance(dist, ContinuousDistribution):
        return sample_positions(dist, int(n_photons), rng, quadrature=quadrature, logger=logger)
    if not dist.complete:
        raise IncompleteDistributionError(dist)
    probabilities = dist.probabilities / numpy.sum(dist.probabilities)
    return rng.multinomial(int(n_photons), probabilities)


def _envelope(dist: ContinuousDistribution, edges: numpy.ndarray, margin: float) -> numpy.ndarray:
    fine = numpy.linspace(0, 1, 9)
    nodes = edges[:-1, numpy.newaxis] + (edges[1:] - edges[:-1])[:, numpy.newaxis] * fine
    values = numpy.asarray(dist.density(nodes.ravel()), dtype=float).reshape(nodes.shape)
    floor = 1e-12 * float(numpy.max(values))
    return margin * numpy.maximum(values.max(axis=1), floor)


def sample_positions(dist: ContinuousDistribution, n_photons: int, rng: RngStream, *,
                     quadrature: QuadratureSpec=DEFAULT_QUADRATURE,
                     logger: Optional[logging.Logger]=None) -> numpy.ndarray:
    """Image plane positions on [-L sigma, L sigma] by rejection sampling.

    The proposal is piecewise constant on bins of width sigma / 8 with the bin maximum of the density (sampled on
    a sub grid) times a safety margin. If an accepted proposal reveals a density above its envelope, the envelope is
    inflated, a warning is logged and the whole draw is repeated.
    """
    logger = logger or logging.getLogger("quaperture.estimation")
    halfwidth = quadrature.halfwidth(dist.sigma)
    bins = int(math.ceil(2 * quadrature.domain_halfwidth * ENVELOPE_RESOLUTION))
    edges = numpy.linspace(-halfwidth, halfwidth, bins + 1)
    widths = numpy.diff(edges)
    margin = ENVELOPE_MARGIN

    for _ in range(_MAX_INFLATIONS):
        envelope = _envelope(dist, edges, margin)
        weights = envelope * widths
        weights = weights / numpy.sum(weights)

        accepted = []
        missing = n_photons
        violated = False
        while missing > 0:
            batch = max(64, int(1.5 * missing))
            chosen = rng.generator.choice(bins, size=batch, p=weights)
            x = edges[chosen] + widths[chosen] * rng.uniform(size=batch)
            density = numpy.asarray(dist.density(x), dtype=float)
            if numpy.any(density > envelope[chosen]):
                violated = True
                break
            keep = x[rng.uniform(size=batch) * envelope[chosen] < density]
            accepted.append(keep[:missing])
            missing -= min(missing, keep.size)
        if not violated:
            return numpy.concatenate(accepted) if accepted else numpy.empty(0)
        margin *= 2
        logger.warning("Density exceeds the rejection sampling envelope; inflating the margin to %g and drawing "
                       "again", margin)
    raise SamplingEnvelopeError(margin)


def kolmogorov_distance(counts: numpy.ndarray, probabilities: numpy.ndarray) -> float:
    """max_i |F_emp(i) - F(i)| between the empirical and the analytic cumulative distribution over outcomes."""
    counts = numpy.asarray(counts, dtype=float)
    probabilities = numpy.asarray(probabilities, dtype=float)
    if counts.shape != probabilities.shape:
        raise ValueError('counts and probabilities have different shapes', counts.shape, probabilities.shape)
    total = numpy.sum(counts)
    if total == 0:
        raise ValueError('The Kolmogorov distance of an empty sample is undefined')
    return float(numpy.max(numpy.abs(numpy.cumsum(counts / total) - numpy.cumsum(probabilities))))


class SamplingEnvelopeError(NumericalFailure):
    def __init__(self, margin: float) -> None:
        super().__init__()
        self.margin = margin

    def __str__(self) -> str:
        return "No rejection sampling envelope found up to the margin {:g}".format(self.margin)


class IncompleteDistributionError(ValueError):
    """Photons cannot be sampled from a distribution lacking its bucket outcome."""

    def __init__(self, dist: OutcomeDistribution) -> None:
        super().__init__()
        self.dist = dist

    def __str__(self) -> str:
        return "Cannot sample from incomplete distribution {!r}; enable the bucket outcome".format(self.dist)
