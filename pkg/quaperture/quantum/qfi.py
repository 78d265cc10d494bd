"""Quantum Fisher information (QFI) of weak-source scenes.

For N independent photons the QFI is N tr(rho L^2). For the symmetric two-point problem it is independent of theta
and splits into a single-aperture and a long-baseline part,

    K = -4 N Gamma_comp''(0) = 4 N (pi/sigma)^2 / 3 + (4 N / n) sum_mu alpha_mu^2 = K_1ap + K_lb.
"""
import logging
import math
from typing import Dict, NamedTuple, Optional

import numpy

from quaperture.apertures import ApertureArray, require_symmetric
from quaperture.modes import DEFAULT_J_MAX
from quaperture.quantum.density import density_matrix, density_matrix_derivative, DEFAULT_TRUNCATION_TOLERANCE
from quaperture.quantum.sld import sld
from quaperture.scenes import Scene, SceneParametrization

__all__ = ["QfiResult", "TwoPointSldWorkspace", "qfi_numeric", "qfi_two_point_analytic", "two_point_sld_workspace"]


logger = logging.getLogger("quaperture.qfi")


class QfiResult(NamedTuple('QfiResult', [('total', float),
                                         ('k_1ap', Optional[float]),
                                         ('k_lb', Optional[float]),
                                         ('n_photons', float),
                                         ('trace_deficit', float)])):
    """QFI for n_photons photons. k_1ap and k_lb are None when the single-aperture/long-baseline split is not
    available for the problem."""
    __slots__ = ()

    def __new__(cls, total: float, k_1ap: Optional[float]=None, k_lb: Optional[float]=None, n_photons: float=1.,
                trace_deficit: float=0.):
        if total < -1e-12 * max(1., abs(total)):
            raise ValueError('The QFI must not be negative', total)
        return super().__new__(cls, max(float(total), 0.), k_1ap, k_lb, float(n_photons), float(trace_deficit))

    @property
    def has_split(self) -> bool:
        return self.k_1ap is not None and self.k_lb is not None

    @property
    def single_aperture_fraction(self) -> Optional[float]:
        if not self.has_split or self.total == 0:
            return None
        return self.k_1ap / self.total

    @property
    def per_photon(self) -> float:
        return self.total / self.n_photons


def qfi_two_point_analytic(array: ApertureArray, n_photons: float=1.) -> QfiResult:
    """K_1ap = -4 N Gamma_1ap''(0) = 4 pi^2 N / (3 sigma^2) and K_lb = (4 N / n) sum_mu alpha_mu^2."""
    require_symmetric(array, 'analytic two-point QFI')
    k_1ap = 4 * n_photons * (math.pi / array.sigma) ** 2 / 3
    k_lb = 4 * n_photons * array.mean_square_position
    return QfiResult(k_1ap + k_lb, k_1ap, k_lb, n_photons)


def qfi_numeric(array: ApertureArray, scene: Scene, parametrization: SceneParametrization,
                j_max: int=DEFAULT_J_MAX, *, method: str='jacobi',
                truncation_tolerance: float=DEFAULT_TRUNCATION_TOLERANCE,
                allow_truncation: bool=False) -> QfiResult:
    """N tr(rho L^2) in the local mode basis truncated at j_max.

    The split into K_1ap and K_lb is attached when the two-point closed form applies (two-point parametrization on a
    symmetric array)."""
    rho = density_matrix(array, scene, j_max, truncation_tolerance=truncation_tolerance,
                         allow_truncation=allow_truncation)
    drho = density_matrix_derivative(array, scene, parametrization, j_max)
    result = sld(rho.matrix, drho, method=method)
    total = scene.n_photons * result.expectation_of_square(rho.matrix)
    logger.debug("Numeric QFI %g at theta=%s (dim %d, %d skipped pairs)", total, scene.theta, rho.dim,
                 result.skipped_pairs)

    k_1ap = k_lb = None
    if parametrization.is_two_point and array.is_symmetric:
        analytic = qfi_two_point_analytic(array, scene.n_photons)
        k_1ap, k_lb = analytic.k_1ap, analytic.k_lb
    return QfiResult(total, k_1ap, k_lb, scene.n_photons, rho.trace_deficit)


class TwoPointSldWorkspace(NamedTuple('TwoPointSldWorkspace', [('theta', float),
                                                               ('delta_overlap', float),
                                                               ('delta_k2', float),
                                                               ('gamma', float),
                                                               ('b2', float),
                                                               ('c3', float),
                                                               ('c4', float),
                                                               ('sld_entries', Dict[str, float]),
                                                               ('degenerate', bool)])):
    """Closed form SLD of the symmetric two-point state in its four dimensional eigenbasis.

    e_1, e_2 are the antisymmetric and symmetric combinations of the displaced PSFs with eigenvalues (1 -+ delta)/2,
    e_3, e_4 the normalized parts of their derivatives orthogonal to the support. At theta = 0 the overlap is one and
    the workspace is flagged degenerate: L11 is undefined (nan) and the kernel couplings vanish."""
    __slots__ = ()

    @property
    def eigenvalues(self):
        return (1 - self.delta_overlap) / 2, (1 + self.delta_overlap) / 2

    def qfi(self, n_photons: float=1.) -> float:
        """4 N Delta k^2"""
        return 4 * n_photons * self.delta_k2

    def qfi_from_entries(self, n_photons: float=1.) -> float:
        """N sum_i D_i sum_k L_ik^2 from the SLD entries. Equals qfi() away from theta = 0."""
        d1, d2 = self.eigenvalues
        entries = self.sld_entries
        return n_photons * (d1 * (entries['L11'] ** 2 + entries['L13'] ** 2) +
                            d2 * (entries['L22'] ** 2 + entries['L24'] ** 2))


def two_point_sld_workspace(array: ApertureArray, theta: float, quadrature_order: int=128) -> TwoPointSldWorkspace:
    """All overlap integrals of the two-point SLD computed by aperture-plane quadrature of |psi~_comp|^2.

    delta = int |psi~|^2 cos(2 k theta), Delta k^2 = int k^2 |psi~|^2, gamma = -int k |psi~|^2 sin(2 k theta),
    b^2 = int k^2 |psi~|^2 cos(2 k theta)."""
    require_symmetric(array, 'two-point SLD workspace')
    if not theta >= 0:
        raise ValueError('theta must not be negative', theta)

    def integral(f) -> float:
        return float(numpy.real(array.aperture_integral(f, order=quadrature_order)))

    delta = integral(lambda k: numpy.cos(2 * k * theta))
    delta_k2 = integral(lambda k: k ** 2)
    gamma = -integral(lambda k: k * numpy.sin(2 * k * theta))
    b2 = integral(lambda k: k ** 2 * numpy.cos(2 * k * theta))

    degenerate = theta == 0 or 1 - delta <= 0
    if degenerate:
        c3 = c4 = 0.
        entries = {'L11': float('nan'), 'L13': 0., 'L22': 0., 'L24': 0.}
    else:
        c3 = math.sqrt(max(0., delta_k2 + b2 - gamma ** 2 / (1 - delta)))
        c4 = math.sqrt(max(0., delta_k2 - b2 - gamma ** 2 / (1 + delta)))
        entries = {'L11': -2 * gamma / (1 - delta),
                   'L13': -2 * c3 / math.sqrt(1 - delta),
                   'L22': 2 * gamma / (1 + delta),
                   'L24': -2 * c4 / math.sqrt(1 + delta)}
    return TwoPointSldWorkspace(float(theta), delta, delta_k2, gamma, b2, c3, c4, entries, degenerate)
