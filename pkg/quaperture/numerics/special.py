"""Special functions of the hard-aperture mode basis: Legendre polynomials and spherical Bessel functions."""
import logging
from typing import Union

import numpy
from scipy import special as scipy_special

from quaperture.numerics.differentiation import central_diff
from quaperture.utils.types import ArrayLike

__all__ = ["legendre", "legendre_table", "spherical_bessel", "DomainError"]


logger = logging.getLogger("quaperture.special")

_DOMAIN_SLACK = 1e-12


def _checked_argument(t: ArrayLike) -> numpy.ndarray:
    t = numpy.asarray(t, dtype=float)
    if numpy.any(numpy.abs(t) > 1 + _DOMAIN_SLACK):
        raise DomainError(t)
    return numpy.clip(t, -1., 1.)


def legendre_table(j_max: int, t: ArrayLike) -> numpy.ndarray:
    """P_0(t) ... P_{j_max}(t) stacked along the first axis, evaluated by the three term recurrence
    (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}."""
    if j_max < 0:
        raise ValueError('Legendre order must not be negative', j_max)
    t = _checked_argument(t)
    table = numpy.empty((j_max + 1,) + t.shape)
    table[0] = 1.
    if j_max >= 1:
        table[1] = t
    for j in range(1, j_max):
        table[j + 1] = ((2 * j + 1) * t * table[j] - j * table[j - 1]) / (j + 1)
    return table


def legendre(j: int, t: ArrayLike) -> Union[float, numpy.ndarray]:
    """Legendre polynomial P_j(t) for |t| <= 1."""
    value = legendre_table(j, t)[j]
    return value.item() if value.ndim == 0 else value


def spherical_bessel(j: ArrayLike, z: ArrayLike, derivative: bool=False) -> Union[float, numpy.ndarray]:
    """Spherical Bessel function of the first kind j_j(z) or its derivative (scipy's recurrences).

    The derivative at z = 0 is set to its exact value (1/3 for j = 1, zero otherwise). Other non finite derivative
    values, which scipy returns for extreme order/argument pairs, are replaced by a central difference of the
    function itself."""
    value = numpy.asarray(scipy_special.spherical_jn(j, z, derivative=derivative), dtype=float)
    if derivative and not numpy.all(numpy.isfinite(value)):
        orders, arguments = (numpy.atleast_1d(a).ravel() for a in numpy.broadcast_arrays(j, z))
        flat = numpy.atleast_1d(value).ravel().copy()
        for index in numpy.flatnonzero(~numpy.isfinite(flat)):
            order = int(orders[index])
            if arguments[index] == 0:
                flat[index] = 1 / 3 if order == 1 else 0.
                continue
            logger.debug("Falling back to finite differences for j'_%d(%g)", order, arguments[index])
            flat[index] = central_diff(lambda s: scipy_special.spherical_jn(order, s), float(arguments[index]))
        value = flat.reshape(value.shape)
    return value.item() if value.ndim == 0 else value


class DomainError(ValueError):
    """A Legendre polynomial was requested outside of [-1, 1]."""

    def __init__(self, argument: numpy.ndarray) -> None:
        super().__init__()
        self.argument = argument

    def __str__(self) -> str:
        worst = float(numpy.max(numpy.abs(self.argument)))
        return "Legendre polynomials are only evaluated on [-1, 1] but got |t| = {:g}".format(worst)
