"""Largest half separation up to which a receiver on a two aperture array beats the long-baseline QFI K_lb."""
import logging
import math
from typing import Any, NamedTuple, Optional, Tuple

import numpy
from scipy import optimize

from quaperture.apertures import two_aperture
from quaperture.numerics.failures import NumericalFailure
from quaperture.quantum.qfi import qfi_two_point_analytic
from quaperture.receivers.base import Receiver
from quaperture.scenes import TwoPointScene

__all__ = ["ThetaMax", "theta_max_vs_longbaseline", "NoSignChange"]

DEFAULT_BRACKET = (1e-3, 1.)


class ThetaMax(NamedTuple('ThetaMax', [('receiver', Any),
                                       ('r', float),
                                       ('theta_max', float),
                                       ('degenerate', bool)])):
    """theta_max in units of sigma. Degenerate results (CFI identical to K_lb) have theta_max nan."""
    __slots__ = ()


def theta_max_vs_longbaseline(receiver: Receiver, r: float, bracket: Tuple[float, float]=DEFAULT_BRACKET, *,
                              grid: int=200, xtol: float=1e-6, sigma: float=1.,
                              degenerate_tolerance: float=1e-9,
                              logger: Optional[logging.Logger]=None) -> ThetaMax:
    """Smallest root of CFI(theta) - K_lb in bracket (units of sigma).

    The bracket is scanned on a uniform grid for the first sign change which is then refined by bisection to xtol
    sigma.

    Raises:
        NoSignChange: if the CFI stays above or below K_lb on the whole bracket without being identical to it.
    """
    logger = logger or logging.getLogger("quaperture.receivers")
    low, high = bracket
    if not 0 < low < high:
        raise ValueError('The bracket must satisfy 0 < low < high', bracket)

    array = two_aperture(r, sigma)
    k_lb = qfi_two_point_analytic(array).k_lb

    def excess(theta: float) -> float:
        return receiver.cfi(array, TwoPointScene(theta * sigma)).value - k_lb

    thetas = numpy.linspace(low, high, grid)
    values = numpy.array([excess(theta) for theta in thetas])
    if numpy.all(numpy.abs(values) <= degenerate_tolerance * max(k_lb, 1.)):
        logger.info("%r on r=%g matches K_lb on the whole bracket", receiver, r)
        return ThetaMax(receiver, float(r), math.nan, True)

    negative = numpy.flatnonzero(values <= 0)
    if values[0] <= 0 or negative.size == 0:
        raise NoSignChange(receiver, r, bracket, values[0] > 0)
    index = int(negative[0])
    root = optimize.bisect(excess, thetas[index - 1], thetas[index], xtol=xtol)
    logger.debug("theta_max of %r at r=%g: %.7f sigma", receiver, r, root)
    return ThetaMax(receiver, float(r), float(root), False)


class NoSignChange(NumericalFailure):
    """CFI - K_lb does not change sign on the bracket."""

    def __init__(self, receiver: Any, r: float, bracket: Tuple[float, float], above: bool) -> None:
        super().__init__()
        self.receiver = receiver
        self.r = r
        self.bracket = bracket
        self.above = above

    def __str__(self) -> str:
        return "The CFI of {!r} at r={} stays {} K_lb on {}".format(
            self.receiver, self.r, 'above' if self.above else 'below', self.bracket)
