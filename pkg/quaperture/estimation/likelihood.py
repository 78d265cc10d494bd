"""Maximum likelihood estimation of the scene parameter from a detection record."""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy
from scipy import optimize

from quaperture.apertures import ApertureArray
from quaperture.numerics.failures import NumericalFailure
from quaperture.receivers.base import Receiver
from quaperture.receivers.distribution import ContinuousDistribution
from quaperture.scenes import SceneParametrization, TwoPointParametrization

__all__ = ["log_likelihood", "mle_theta", "joint_mle_theta", "DEFAULT_BRACKET", "UndefinedEstimate"]


#: in units of sigma
DEFAULT_BRACKET = (1e-4, 1.5)
DEFAULT_STARTS = 5
DEFAULT_XATOL = 1e-7


def log_likelihood(record: numpy.ndarray, receiver: Receiver, array: ApertureArray, theta: float,
                   parametrization: Optional[SceneParametrization]=None) -> float:
    """sum_i n_i log P_i(theta) for outcome counts, or sum_k log P(x_k; theta) for image plane positions.

    Outcomes with vanishing probability but non-zero counts give -inf."""
    parametrization = parametrization or TwoPointParametrization()
    dist = receiver.distribution(array, parametrization.scene(theta), parametrization)
    if isinstance(dist, ContinuousDistribution):
        density = numpy.asarray(dist.density(numpy.asarray(record, dtype=float)), dtype=float)
        if numpy.any(density <= 0):
            return -math.inf
        return float(numpy.sum(numpy.log(density)))

    counts = numpy.asarray(record, dtype=float)
    probabilities = dist.probabilities
    if counts.shape != probabilities.shape:
        raise ValueError('One count per outcome of {!r} is required'.format(receiver), counts.shape,
                         probabilities.shape)
    observed = counts > 0
    if numpy.any(probabilities[observed] <= 0):
        return -math.inf
    return float(numpy.sum(counts[observed] * numpy.log(probabilities[observed])))


def mle_theta(record: numpy.ndarray, receiver: Receiver, array: ApertureArray,
              bracket: Optional[Tuple[float, float]]=None, *,
              parametrization: Optional[SceneParametrization]=None,
              starts: int=DEFAULT_STARTS, xatol: float=DEFAULT_XATOL,
              logger: Optional[logging.Logger]=None) -> float:
    """Maximizer of the log likelihood on bracket (default (1e-4, 1.5) sigma).

    The bracket is split into `starts` sub intervals, each searched by bounded golden section search with parabolic
    refinement to xatol sigma, and the best local maximum is returned. Oscillating likelihoods of mode sorting
    receivers have several local maxima.

    Raises:
        UndefinedEstimate: if the likelihood is flat or its maximum lies on the bracket boundary.
    """
    return joint_mle_theta([(record, receiver)], array, bracket, parametrization=parametrization, starts=starts,
                           xatol=xatol, logger=logger)


def joint_mle_theta(observations: Sequence[Tuple[numpy.ndarray, Receiver]], array: ApertureArray,
                    bracket: Optional[Tuple[float, float]]=None, *,
                    parametrization: Optional[SceneParametrization]=None,
                    starts: int=DEFAULT_STARTS, xatol: float=DEFAULT_XATOL,
                    logger: Optional[logging.Logger]=None) -> float:
    """Maximizer of the summed log likelihood of detection records taken with several receivers."""
    logger = logger or logging.getLogger("quaperture.estimation")
    sigma = array.sigma
    low, high = bracket if bracket is not None else (DEFAULT_BRACKET[0] * sigma, DEFAULT_BRACKET[1] * sigma)
    if not 0 <= low < high:
        raise ValueError('The bracket must satisfy 0 <= low < high', (low, high))
    tolerance = xatol * sigma

    def negative(theta: float) -> float:
        value = sum(log_likelihood(record, receiver, array, theta, parametrization)
                    for record, receiver in observations)
        return math.inf if value == -math.inf else -value

    edges = numpy.linspace(low, high, starts + 1)
    probes = numpy.linspace(low, high, 4 * starts + 1)
    probe_values = numpy.array([negative(theta) for theta in probes])
    finite = probe_values[numpy.isfinite(probe_values)]
    if finite.size == 0 or numpy.ptp(finite) <= 1e-12 * max(1., float(numpy.max(numpy.abs(finite)))):
        raise UndefinedEstimate(observations[0][1], 'the likelihood does not depend on theta')

    best_theta, best_value = None, math.inf
    for sub_low, sub_high in zip(edges[:-1], edges[1:]):
        result = optimize.minimize_scalar(negative, bounds=(sub_low, sub_high), method='bounded',
                                          options={'xatol': tolerance})
        if result.fun < best_value:
            best_theta, best_value = float(result.x), float(result.fun)
    for theta, value in zip(probes, probe_values):
        if value < best_value:
            best_theta, best_value = float(theta), float(value)

    if best_theta is None or not math.isfinite(best_value):
        raise UndefinedEstimate(observations[0][1], 'the likelihood vanishes on the whole bracket')
    if best_theta - low < 10 * tolerance or high - best_theta < 10 * tolerance:
        reason = 'the likelihood is maximal on the bracket boundary at {:g}'.format(best_theta)
        raise UndefinedEstimate(observations[0][1], reason)
    logger.debug("MLE %.9f from %d records", best_theta, len(observations))
    return best_theta


class UndefinedEstimate(NumericalFailure):
    """The detection record does not determine the parameter."""

    def __init__(self, receiver: Receiver, reason: str) -> None:
        super().__init__()
        self.receiver = receiver
        self.reason = reason

    def __str__(self) -> str:
        return "No maximum likelihood estimate for {!r}: {}".format(self.receiver, self.reason)
