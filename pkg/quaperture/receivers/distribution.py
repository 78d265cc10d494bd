"""Outcome distributions of receivers and the classical Fisher information (CFI) they carry."""
import logging
import math
import warnings
from typing import Any, Callable, NamedTuple, Optional, Sequence, Tuple

import numpy

from quaperture.numerics.quadrature import QuadratureSpec, DEFAULT_QUADRATURE, integrate
from quaperture.utils.types import frozen

__all__ = ["OutcomeDistribution", "CfiResult", "cfi_from_distribution", "ZERO_PROBABILITY", "ZERO_DERIVATIVE",
           "SingularContributionWarning", "InvalidDistributionError"]


logger = logging.getLogger("quaperture.receivers")

#: outcomes below this probability are treated as vanishing
ZERO_PROBABILITY = 1e-14
#: derivative magnitude below which a vanishing outcome carries no information
ZERO_DERIVATIVE = 1e-12

_SIMPLEX_TOLERANCE = 1e-9


class OutcomeDistribution:
    """Probabilities P_i(theta) of discrete outcomes and their theta derivatives, or a continuous density P(x).

    Discrete outcomes may carry the limit of (dP_i)^2/P_i for a quadratically vanishing probability which is used
    when P_i is numerically zero (nan when unknown).
    """

    def __init__(self, labels: Sequence[Any], probabilities: Sequence[float], derivatives: Sequence[float],
                 limits: Optional[Sequence[float]]=None, complete: bool=True) -> None:
        probabilities = numpy.asarray(probabilities, dtype=float)
        derivatives = numpy.asarray(derivatives, dtype=float)
        labels = tuple(labels)
        if probabilities.ndim != 1 or probabilities.shape != derivatives.shape or len(labels) != probabilities.size:
            raise InvalidDistributionError('labels, probabilities and derivatives must have equal lengths',
                                           (len(labels), probabilities.shape, derivatives.shape))
        if limits is None:
            limits = numpy.full(probabilities.shape, numpy.nan)
        limits = numpy.asarray(limits, dtype=float)
        if limits.shape != probabilities.shape:
            raise InvalidDistributionError('one limit per outcome is required', limits.shape)
        if numpy.any(probabilities < -_SIMPLEX_TOLERANCE):
            raise InvalidDistributionError('probabilities must not be negative', probabilities.min())
        total = float(numpy.sum(probabilities))
        if complete:
            if abs(total - 1) > _SIMPLEX_TOLERANCE:
                raise InvalidDistributionError('probabilities must sum to one', total)
            if abs(float(numpy.sum(derivatives))) > _SIMPLEX_TOLERANCE:
                raise InvalidDistributionError('derivatives must sum to zero', float(numpy.sum(derivatives)))
        elif total > 1 + _SIMPLEX_TOLERANCE:
            raise InvalidDistributionError('probabilities exceed one', total)

        self._labels = labels
        self._probabilities = frozen(numpy.clip(probabilities, 0., None))
        self._derivatives = frozen(derivatives)
        self._limits = frozen(limits)
        self._complete = complete

    @property
    def labels(self) -> Tuple[Any, ...]:
        return self._labels

    @property
    def probabilities(self) -> numpy.ndarray:
        return self._probabilities

    @property
    def derivatives(self) -> numpy.ndarray:
        return self._derivatives

    @property
    def limits(self) -> numpy.ndarray:
        return self._limits

    @property
    def complete(self) -> bool:
        """False if truncated outcomes are missing (no bucket)."""
        return self._complete

    @property
    def continuous(self) -> bool:
        return False

    def __len__(self) -> int:
        return len(self._labels)

    def probability(self, label: Any) -> float:
        return float(self._probabilities[self._labels.index(label)])

    def __repr__(self) -> str:
        return 'OutcomeDistribution(labels={!r}, probabilities={!r})'.format(self._labels,
                                                                             self._probabilities.tolist())


class ContinuousDistribution(OutcomeDistribution):
    """Image-plane photon density P(x) with its theta derivative, supported on [-L sigma, L sigma] for the purpose
    of integration and sampling."""

    def __init__(self, density: Callable[[numpy.ndarray], numpy.ndarray],
                 density_derivative: Callable[[numpy.ndarray], numpy.ndarray],
                 sigma: float, breakpoints: Sequence[float]=()) -> None:
        super().__init__((), (), (), complete=False)
        self._density = density
        self._density_derivative = density_derivative
        self._sigma = float(sigma)
        self._breakpoints = tuple(breakpoints)

    @property
    def continuous(self) -> bool:
        return True

    @property
    def complete(self) -> bool:
        return True

    @property
    def sigma(self) -> float:
        return self._sigma

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return self._breakpoints

    def density(self, x):
        return self._density(x)

    def density_derivative(self, x):
        return self._density_derivative(x)

    def fisher_integrand(self, x):
        """(dP/dtheta)^2 / P at x, zero where P vanishes to machine precision."""
        x = numpy.asarray(x, dtype=float)
        p = numpy.asarray(self._density(x), dtype=float)
        dp = numpy.asarray(self._density_derivative(x), dtype=float)
        safe = numpy.where(p > 1e-300, p, 1.)
        result = numpy.where(p > 1e-300, dp ** 2 / safe, 0.)
        return result.item() if result.ndim == 0 else result

    def __repr__(self) -> str:
        return 'ContinuousDistribution(sigma={!r})'.format(self._sigma)


class CfiResult(NamedTuple('CfiResult', [('value', float),
                                         ('per_outcome', numpy.ndarray),
                                         ('receiver', Any),
                                         ('theta', Optional[float]),
                                         ('array', Any),
                                         ('n_photons', float)])):
    """CFI of N photons. per_outcome holds N (dP_i)^2/P_i (empty for continuous outcomes)."""
    __slots__ = ()

    def ratio_to(self, qfi: float) -> float:
        return self.value / qfi if qfi else float('nan')


def cfi_from_distribution(dist: OutcomeDistribution, n_photons: float=1., *,
                          quadrature: QuadratureSpec=DEFAULT_QUADRATURE,
                          receiver: Any=None, theta: Optional[float]=None, array: Any=None) -> CfiResult:
    """N sum_i (dP_i)^2 / P_i.

    Outcomes with P_i < 1e-14 contribute their recorded series limit if they have one and are skipped if
    additionally |dP_i| < 1e-12. A vanishing outcome with a finite derivative emits a SingularContributionWarning and
    contributes (dP_i)^2/P_i, which may be infinite.

    Continuous distributions are integrated over the image plane with the given quadrature spec.
    """
    if isinstance(dist, ContinuousDistribution):
        result = integrate(dist.fisher_integrand, quadrature, sigma=dist.sigma, breakpoints=dist.breakpoints)
        return CfiResult(n_photons * result.value, numpy.empty(0), receiver, theta, array, n_photons)

    contributions = numpy.zeros(len(dist))
    for index, (p, dp, limit) in enumerate(zip(dist.probabilities, dist.derivatives, dist.limits)):
        if p >= ZERO_PROBABILITY:
            contributions[index] = dp ** 2 / p
        elif not math.isnan(limit):
            contributions[index] = limit
        elif abs(dp) < ZERO_DERIVATIVE:
            logger.debug("Skipping vanishing outcome %r (P=%g, dP=%g)", dist.labels[index], p, dp)
        else:
            warnings.warn(SingularContributionWarning(dist.labels[index], p, dp))
            contributions[index] = dp ** 2 / p if p > 0 else math.inf
    contributions *= n_photons
    return CfiResult(float(numpy.sum(contributions)), frozen(contributions), receiver, theta, array, n_photons)


class SingularContributionWarning(UserWarning):
    """An outcome has vanishing probability but finite derivative, so its CFI contribution diverges."""

    def __init__(self, label: Any, probability: float, derivative: float) -> None:
        super().__init__()
        self.label = label
        self.probability = probability
        self.derivative = derivative

    def __str__(self) -> str:
        return "Outcome {!r} has probability {:.3g} but derivative {:.3g}; its CFI contribution diverges".format(
            self.label, self.probability, self.derivative)


class InvalidDistributionError(ValueError):
    def __init__(self, reason: str, value: Any) -> None:
        super().__init__()
        self.reason = reason
        self.value = value

    def __str__(self) -> str:
        return "Invalid outcome distribution: {} (got {!r})".format(self.reason, self.value)
