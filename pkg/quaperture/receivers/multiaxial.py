"""Receivers acting on the common image plane of all apertures (multi-axial beam combination)."""
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy

from quaperture.apertures import ApertureArray, require_symmetric
from quaperture.modes import CompoundGramSchmidt, LocalModeBasis, DEFAULT_J_MAX
from quaperture.receivers.base import Receiver, AmplitudeReceiver, UnsupportedScene
from quaperture.receivers.distribution import OutcomeDistribution, ContinuousDistribution
from quaperture.scenes import Scene, SceneParametrization

__all__ = ["DirectImaging", "FullSpade", "BinSpade0", "BinSpade1", "Sliver"]


class DirectImaging(Receiver):
    """Photon counting in the image plane with the continuous density P(x) = sum_s b_s |psi_comp(x - x_s)|^2."""

    type_aliases = ('direct_imaging', 'direct')

    def distribution(self, array: ApertureArray, scene: Scene,
                     parametrization: Optional[SceneParametrization]=None) -> ContinuousDistribution:
        position_derivatives, brightness_derivatives = self._source_derivatives(scene, parametrization)
        positions = scene.positions
        brightness = scene.brightness

        def density(x):
            x = numpy.asarray(x, dtype=float)
            return sum(b * numpy.asarray(array.intensity(x - x_s)) for x_s, b in zip(positions, brightness))

        def density_derivative(x):
            x = numpy.asarray(x, dtype=float)
            total = numpy.zeros(x.shape)
            for x_s, b, dx, db in zip(positions, brightness, position_derivatives, brightness_derivatives):
                if db != 0:
                    total = total + db * numpy.asarray(array.intensity(x - x_s))
                if dx != 0:
                    total = total - b * dx * numpy.asarray(array.intensity_derivative(x - x_s))
            return total

        return ContinuousDistribution(density, density_derivative, array.sigma, breakpoints=tuple(positions))

    @property
    def compare_key(self) -> Any:
        return ()


class FullSpade(AmplitudeReceiver):
    """Mode sorting of the image plane into a truncated orthonormal basis plus a bucket.

    basis 'gram_schmidt' sorts into the first `order` Gram-Schmidt modes of the compound PSF (mirror symmetric arrays
    only), basis 'local' into the local modes j <= j_max of every aperture, labelled (j, mu).
    """

    type_aliases = ('full_spade', 'spade')

    BASES = ('gram_schmidt', 'local')

    def __init__(self, basis: str='gram_schmidt', order: int=20, j_max: int=DEFAULT_J_MAX) -> None:
        if basis not in self.BASES:
            raise ValueError('Unknown SPADE basis {!r}. Use one of {}'.format(basis, self.BASES))
        if int(order) != order or order < 1:
            raise ValueError('The Gram-Schmidt order must be a positive integer', order)
        if int(j_max) != j_max or j_max < 0:
            raise ValueError('j_max must be a non-negative integer', j_max)
        self._basis = basis
        self._order = int(order)
        self._j_max = int(j_max)
        self._gram_schmidt_cache = {}  # type: Dict[ApertureArray, CompoundGramSchmidt]

    @property
    def basis(self) -> str:
        return self._basis

    @property
    def order(self) -> int:
        return self._order

    @property
    def j_max(self) -> int:
        return self._j_max

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        if self._basis == 'gram_schmidt':
            require_symmetric(array, 'Gram-Schmidt SPADE')

    def _gram_schmidt(self, array: ApertureArray) -> CompoundGramSchmidt:
        if array not in self._gram_schmidt_cache:
            self._gram_schmidt_cache[array] = CompoundGramSchmidt(array, self._order)
        return self._gram_schmidt_cache[array]

    def output_labels(self, array: ApertureArray) -> List[Any]:
        if self._basis == 'gram_schmidt':
            return [('gs', m) for m in range(self._order)]
        return LocalModeBasis.for_array(array, self._j_max).labels(array.n)

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        if self._basis == 'gram_schmidt':
            values, derivatives = self._gram_schmidt(array).amplitudes(x)
        else:
            values, derivatives = LocalModeBasis.for_array(array, self._j_max).amplitudes(array, x)
        return values.reshape(-1, 1), derivatives.reshape(-1, 1)

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['basis'] = self._basis
        data['order'] = self._order
        data['j_max'] = self._j_max
        return data

    @property
    def compare_key(self) -> Any:
        return self._basis, self._order, self._j_max

    def __repr__(self) -> str:
        if self._basis == 'gram_schmidt':
            return 'FullSpade(basis={!r}, order={})'.format(self._basis, self._order)
        return 'FullSpade(basis={!r}, j_max={})'.format(self._basis, self._j_max)


class BinSpade0(AmplitudeReceiver):
    """Binary sorter between the compound PSF mode A_0 and its complement.

    <A_0|psi_comp(. - x)> = Gamma_comp(x)."""

    type_aliases = ('binspade0',)

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        require_symmetric(array, '0-BinSPADE')

    def output_labels(self, array: ApertureArray) -> List[Any]:
        return ['mode0']

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        gamma, gamma_derivative, _ = array.autocorr_derivs(x)
        return numpy.array([[gamma]], dtype=complex), numpy.array([[gamma_derivative]], dtype=complex)

    @property
    def compare_key(self) -> Any:
        return ()


class BinSpade1(AmplitudeReceiver):
    """Binary sorter between the normalized first Gram-Schmidt mode A_1 and its complement.

    <A_1|psi_comp(. - x)> = Gamma_comp'(x) / sqrt(Delta k^2)."""

    type_aliases = ('binspade1',)

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        require_symmetric(array, '1-BinSPADE')

    def output_labels(self, array: ApertureArray) -> List[Any]:
        return ['mode1']

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        _, gamma_derivative, gamma_second = array.autocorr_derivs(x)
        norm = math.sqrt(array.momentum_variance)
        return (numpy.array([[gamma_derivative / norm]], dtype=complex),
                numpy.array([[gamma_second / norm]], dtype=complex))

    @property
    def compare_key(self) -> Any:
        return ()


class Sliver(Receiver):
    """Image inversion interferometer separating the even and odd parts of the image plane field.

    For the symmetric two-point scene P_E = (1 + Gamma_comp(2 theta)) / 2 and P_O = 1 - P_E. Other scenes are not
    supported."""

    type_aliases = ('sliver',)

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        require_symmetric(array, 'SLIVER')

    def distribution(self, array: ApertureArray, scene: Scene,
                     parametrization: Optional[SceneParametrization]=None) -> OutcomeDistribution:
        self.validate(array, scene)
        if parametrization is not None and not parametrization.is_two_point:
            raise UnsupportedScene(self, 'only the symmetric two-point scene is supported')
        self._source_derivatives(scene, parametrization)
        if not (scene.source_count == 2 and scene.positions[0] == -scene.positions[1]):
            raise UnsupportedScene(self, 'only the symmetric two-point scene is supported')
        theta = float(scene.theta)
        gamma, gamma_derivative, _ = array.autocorr_derivs(2 * theta)
        even = (1 + gamma) / 2
        return OutcomeDistribution(['even', 'odd'], [even, 1 - even], [gamma_derivative, -gamma_derivative],
                                   [float('nan'), 4 * array.momentum_variance])

    @property
    def compare_key(self) -> Any:
        return ()
