"""Single-photon density matrices of weak-source scenes in the local-mode basis of an aperture array.

A photon from source s is in the state |psi_s> with amplitudes <j, mu|psi_s> = n^-1/2 exp(-i alpha_mu x_s)
Gamma_j(x_s). Truncating to j <= j_max loses the weight 1 - sum_s b_s sum_j Gamma_j(x_s)^2 which is reported as
trace deficit.
"""
import logging
import warnings
from typing import List, NamedTuple, Tuple

import numpy

from quaperture.apertures import ApertureArray
from quaperture.modes import LocalModeBasis, DEFAULT_J_MAX
from quaperture.numerics.failures import NumericalFailure
from quaperture.numerics.linalg import EigenDecomposition, eig_hermitian
from quaperture.scenes import Scene, SceneError, SceneParametrization
from quaperture.utils.types import ModeLabel, frozen

__all__ = ["DensityMatrix", "density_matrix", "density_matrix_derivative", "source_amplitudes",
           "DEFAULT_TRUNCATION_TOLERANCE", "TruncationError", "TruncationBiasWarning"]


logger = logging.getLogger("quaperture.density")

DEFAULT_TRUNCATION_TOLERANCE = 1e-4


class DensityMatrix(NamedTuple('DensityMatrix', [('labels', List[ModeLabel]),
                                                 ('matrix', numpy.ndarray),
                                                 ('trace_deficit', float)])):
    """Truncated single-photon density matrix over (j, mu) local mode labels."""
    __slots__ = ()

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def trace(self) -> float:
        return float(numpy.trace(self.matrix).real)

    def eigen(self, method: str='jacobi') -> EigenDecomposition:
        return eig_hermitian(self.matrix, method=method)

    def index(self, label: ModeLabel) -> int:
        return self.labels.index(label)


def source_amplitudes(array: ApertureArray, basis: LocalModeBasis, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Flattened (aperture major) local mode amplitudes of a source at x and their x derivatives."""
    values, derivatives = basis.amplitudes(array, x)
    return values.ravel(), derivatives.ravel()


def _checked_truncation(deficit: float, tolerance: float, allow_truncation: bool, j_max: int) -> None:
    if deficit > tolerance:
        if not allow_truncation:
            raise TruncationError(deficit, tolerance, j_max)
        warnings.warn(TruncationBiasWarning(deficit, j_max))


def density_matrix(array: ApertureArray, scene: Scene, j_max: int=DEFAULT_J_MAX, *,
                   truncation_tolerance: float=DEFAULT_TRUNCATION_TOLERANCE,
                   allow_truncation: bool=False) -> DensityMatrix:
    """rho[(j,mu),(l,nu)] = (1/n) sum_s b_s exp(-i (alpha_mu - alpha_nu) x_s) Gamma_j(x_s) Gamma_l(x_s)

    Raises:
        TruncationError: if the trace deficit exceeds truncation_tolerance and allow_truncation is False. With
            allow_truncation a TruncationBiasWarning is emitted instead.
    """
    basis = LocalModeBasis.for_array(array, j_max)
    labels = basis.labels(array.n)
    matrix = numpy.zeros((len(labels), len(labels)), dtype=complex)
    captured = 0.
    for x, b in zip(scene.positions, scene.brightness):
        v, _ = source_amplitudes(array, basis, x)
        matrix += b * numpy.outer(v, v.conj())
        captured += b * float(basis.captured_fraction(x))
    deficit = max(0., 1. - captured)
    logger.debug("Density matrix of dimension %d for %r with trace deficit %g", len(labels), scene, deficit)
    _checked_truncation(deficit, truncation_tolerance, allow_truncation, j_max)
    return DensityMatrix(labels, frozen(matrix), deficit)


def density_matrix_derivative(array: ApertureArray, scene: Scene, parametrization: SceneParametrization,
                              j_max: int=DEFAULT_J_MAX) -> numpy.ndarray:
    """Analytic d rho/d theta at the parameter value of scene.

    d rho = sum_s [db_s |psi_s><psi_s| + b_s dx_s (|psi_s'><psi_s| + |psi_s><psi_s'|)] where the x derivative of
    the amplitudes carries the phase term -i alpha_mu."""
    if scene.theta is None:
        raise SceneError('the scene does not record its parameter value', scene)
    theta = scene.theta
    position_derivatives = parametrization.position_derivatives(theta)
    brightness_derivatives = parametrization.brightness_derivatives(theta)
    if len(position_derivatives) != scene.source_count:
        raise SceneError('parametrization and scene have different source counts',
                         (len(position_derivatives), scene.source_count))

    basis = LocalModeBasis.for_array(array, j_max)
    dim = basis.size * array.n
    derivative = numpy.zeros((dim, dim), dtype=complex)
    for x, b, dx, db in zip(scene.positions, scene.brightness, position_derivatives, brightness_derivatives):
        v, dv = source_amplitudes(array, basis, x)
        if db != 0:
            derivative += db * numpy.outer(v, v.conj())
        if dx != 0:
            cross = numpy.outer(dv, v.conj())
            derivative += b * dx * (cross + cross.conj().T)
    return frozen(derivative)


class TruncationError(NumericalFailure):
    """The local mode truncation discards more weight than tolerated."""

    def __init__(self, deficit: float, tolerance: float, j_max: int) -> None:
        super().__init__()
        self.deficit = deficit
        self.tolerance = tolerance
        self.j_max = j_max

    def __str__(self) -> str:
        return "Truncation at j_max={} loses weight {:.3g} > {:.3g}. Increase j_max or allow the bias " \
               "explicitly.".format(self.j_max, self.deficit, self.tolerance)


class TruncationBiasWarning(UserWarning):
    def __init__(self, deficit: float, j_max: int) -> None:
        super().__init__()
        self.deficit = deficit
        self.j_max = j_max

    def __str__(self) -> str:
        return "Results are biased by the local mode truncation at j_max={} (trace deficit {:.3g})".format(
            self.j_max, self.deficit)
