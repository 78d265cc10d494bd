from typing import Union

import numpy

__all__ = ["checked_int_cast"]


def checked_int_cast(x: Union[float, int, numpy.ndarray], epsilon: float=1e-6) -> int:
    """int(x) for values that are integral up to epsilon, e.g. photon numbers read from expressions."""
    if isinstance(x, numpy.ndarray):
        if x.size != 1:
            raise ValueError('Not a scalar value')
        x = x.item()
    if isinstance(x, (int, numpy.integer)):
        return int(x)
    if not numpy.isfinite(x):
        raise ValueError('No integer', x)
    int_x = int(round(x))
    if abs(x - int_x) > epsilon:
        raise ValueError('No integer', x)
    return int_x
