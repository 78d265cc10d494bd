"""Closed form CFIs of the symmetric two-point problem and thin wrappers evaluating receivers on it.

All functions take the scene as TwoPointScene (half separation theta, photon number N). Removable singularities at
theta = 0 are replaced by their series limits, which all equal the QFI for the sorting receivers.
"""
import math

import numpy

from quaperture.apertures import ApertureArray, require_symmetric
from quaperture.modes import LocalModeBasis, gamma_j, gamma_j_deriv, DEFAULT_J_MAX
from quaperture.numerics.quadrature import QuadratureSpec, DEFAULT_QUADRATURE
from quaperture.receivers.base import UnsupportedScene
from quaperture.receivers.coaxial import Groupwise, LightPipe, CoefficientSpec
from quaperture.receivers.distribution import CfiResult, ZERO_PROBABILITY
from quaperture.receivers.multiaxial import DirectImaging, BinSpade0, BinSpade1, Sliver
from quaperture.scenes import Scene, TwoPointScene

__all__ = ["direct_imaging_cfi", "binspade_cfi", "sliver_cfi", "groupwise_cfi", "trinary_spade_cfi",
           "lightpipe_cfi", "truncated_groupwise_closed_form"]


#: 1 - Gamma^2 below which the series limit replaces the quotient
_SERIES_THRESHOLD = 1e-10


def _result(value: float, receiver, scene: TwoPointScene, array: ApertureArray) -> CfiResult:
    return CfiResult(scene.n_photons * value, numpy.empty(0), receiver, scene.theta, array, scene.n_photons)


def _two_point(scene: Scene) -> TwoPointScene:
    if not isinstance(scene, TwoPointScene):
        raise UnsupportedScene(scene, 'closed forms exist for the symmetric two-point scene only')
    return scene


def direct_imaging_cfi(array: ApertureArray, scene: Scene,
                       quadrature: QuadratureSpec=DEFAULT_QUADRATURE) -> CfiResult:
    """N int (dP/dtheta)^2 / P dx with P(x) = (|psi_comp(x - theta)|^2 + |psi_comp(x + theta)|^2) / 2 for the
    two-point scene; general scenes need a parametrization and DirectImaging().cfi."""
    return DirectImaging().cfi(array, scene, quadrature=quadrature)


def binspade_cfi(array: ApertureArray, scene: Scene, which: int=0) -> CfiResult:
    """0-BinSPADE: 4N Gamma'(theta)^2 / (1 - Gamma(theta)^2)
    1-BinSPADE: -4N Gamma''(theta)^2 / (Gamma''(0) + Gamma'(theta)^2)

    with Gamma the compound autocorrelation. Both tend to -4N Gamma''(0) for theta -> 0."""
    require_symmetric(array, 'BinSPADE closed form')
    scene = _two_point(scene)
    delta_k2 = array.momentum_variance
    gamma, gamma_derivative, gamma_second = array.autocorr_derivs(scene.theta)
    if which == 0:
        complement = 1 - gamma ** 2
        if complement < _SERIES_THRESHOLD:
            value = 4 * delta_k2
        else:
            value = 4 * gamma_derivative ** 2 / complement
        return _result(value, BinSpade0(), scene, array)
    if which == 1:
        value = 4 * gamma_second ** 2 / (delta_k2 - gamma_derivative ** 2)
        return _result(value, BinSpade1(), scene, array)
    raise ValueError('BinSPADE sorts mode 0 or mode 1', which)


def sliver_cfi(array: ApertureArray, scene: Scene) -> CfiResult:
    """4N Gamma'(2 theta)^2 / (1 - Gamma(2 theta)^2)"""
    require_symmetric(array, 'SLIVER closed form')
    scene = _two_point(scene)
    gamma, gamma_derivative, _ = array.autocorr_derivs(2 * scene.theta)
    complement = 1 - gamma ** 2
    if complement < _SERIES_THRESHOLD:
        value = 4 * array.momentum_variance
    else:
        value = 4 * gamma_derivative ** 2 / complement
    return _result(value, Sliver(), scene, array)


def trinary_spade_cfi(array: ApertureArray, scene: Scene) -> CfiResult:
    """4N Gamma_0'^2 / (1 - Gamma_0^2) + (4 pi^2 N r^2 / sigma^2) Gamma_0(theta)^2 with the single aperture
    Gamma_0(theta) = sin(pi theta / sigma) / (pi theta / sigma)."""
    if array.n != 2:
        raise UnsupportedScene(array, 'the trinary SPADE needs exactly two apertures')
    require_symmetric(array, 'trinary SPADE closed form')
    scene = _two_point(scene)
    sigma = array.sigma
    gamma = gamma_j(0, scene.theta, sigma)
    gamma_derivative = gamma_j_deriv(0, scene.theta, sigma)
    complement = 1 - gamma ** 2
    if complement < _SERIES_THRESHOLD:
        sorting = 4 * (math.pi / sigma) ** 2 / 3
    else:
        sorting = 4 * gamma_derivative ** 2 / complement
    baseline = 4 * (math.pi * array.r / sigma) ** 2 * gamma ** 2
    return _result(sorting + baseline, Groupwise('pairwise', 0, True), scene, array)


def groupwise_cfi(array: ApertureArray, scene: Scene, coefficients: CoefficientSpec='pairwise',
                  j_max: int=DEFAULT_J_MAX, with_bucket: bool=True, parametrization=None) -> CfiResult:
    """CFI of the groupwise receiver from its outcome distribution. Per outcome contributions are available in
    the result; without the bucket their partial sums over j are the truncated CFI."""
    return Groupwise(coefficients, j_max, with_bucket).cfi(array, scene, parametrization)


def lightpipe_cfi(array: ApertureArray, scene: Scene, coefficients: CoefficientSpec='pairwise',
                  parametrization=None) -> CfiResult:
    """sum_gamma (dP_gamma)^2 / P_gamma with P_gamma = (1/n) sum_s b_s B_gamma(x_s)."""
    return LightPipe(coefficients).cfi(array, scene, parametrization)


def truncated_groupwise_closed_form(array: ApertureArray, scene: Scene, j_max: int=DEFAULT_J_MAX,
                                    with_bucket: bool=True) -> CfiResult:
    """Pairwise groupwise receiver truncated at j_max:

        4N sum_{j <= j_max} [Gamma_j'(theta)^2 + (1/n) sum_mu alpha_mu^2 Gamma_j(theta)^2] + N (dP_b)^2 / P_b

    with the bucket P_b = 1 - sum_{j <= j_max} Gamma_j(theta)^2."""
    require_symmetric(array, 'truncated groupwise closed form')
    scene = _two_point(scene)
    basis = LocalModeBasis.for_array(array, j_max)
    gamma = basis.gamma_table(scene.theta)
    gamma_derivative = basis.gamma_derivative_table(scene.theta)
    per_mode = 4 * (gamma_derivative ** 2 + array.mean_square_position * gamma ** 2)
    value = float(numpy.sum(per_mode))
    if with_bucket:
        bucket = 1 - float(numpy.sum(gamma ** 2))
        bucket_derivative = -2 * float(numpy.sum(gamma * gamma_derivative))
        if bucket < ZERO_PROBABILITY:
            value += max(0., 4 * array.momentum_variance - value)
        else:
            value += bucket_derivative ** 2 / bucket
    result = _result(value, Groupwise('pairwise', j_max, with_bucket), scene, array)
    return result._replace(per_outcome=scene.n_photons * per_mode)
