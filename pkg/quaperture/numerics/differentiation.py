"""Central finite differences with Richardson extrapolation. Used as an oracle for analytic derivatives."""
from typing import Callable, Optional, Union

import numpy

__all__ = ["central_diff", "DEFAULT_RELATIVE_STEP"]

#: default step in units of sigma
DEFAULT_RELATIVE_STEP = 1e-5


def central_diff(f: Callable, x: float, h: Optional[float]=None, richardson_levels: int=1, *,
                 sigma: float=1.) -> Union[float, complex, numpy.ndarray]:
    """Derivative of f at x.

    The symmetric difference (f(x+h) - f(x-h))/(2h) has an error series in even powers of h. Every Richardson level
    halves the step and cancels the next power, so one level gives O(h^4).

    Args:
        f: Function of one real variable. May return scalars or arrays (complex allowed).
        x: Evaluation point.
        h: Step. Defaults to 1e-5 * sigma.
        richardson_levels: Number of extrapolation levels.
        sigma: Length scale of the default step.
    """
    if h is None:
        h = DEFAULT_RELATIVE_STEP * sigma
    if not h > 0:
        raise ValueError('Finite difference step must be positive', h)
    if richardson_levels < 0:
        raise ValueError('richardson_levels must not be negative', richardson_levels)

    def symmetric_difference(step: float):
        return (numpy.asarray(f(x + step)) - numpy.asarray(f(x - step))) / (2 * step)

    tableau = [symmetric_difference(h / 2 ** k) for k in range(richardson_levels + 1)]
    for level in range(1, richardson_levels + 1):
        factor = 4 ** level
        tableau = [(factor * finer - coarser) / (factor - 1)
                   for coarser, finer in zip(tableau[:-1], tableau[1:])]
    result = tableau[0]
    return result.item() if result.ndim == 0 else result
