"""This module defines the receiver abstraction: a measurement on the collected light that turns a scene into an
outcome distribution.

Classes:
    - Receiver: Abstract measurement with a distribution for every scene.
    - AmplitudeReceiver: Receiver whose outcomes project onto orthonormal output modes, optionally completed by a
        bucket outcome for everything not sorted.
    - RotatedReceiver: Applies a fixed unitary to a subset of the output modes of an AmplitudeReceiver.

Functions:
    - rotate_outputs: Convenience constructor for RotatedReceiver.
    - output_sectors: Groups the outputs of an AmplitudeReceiver whose amplitudes share parity and phase.
"""
import logging
from abc import abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy

from quaperture.apertures import ApertureArray
from quaperture.comparable import Comparable
from quaperture.numerics.quadrature import QuadratureSpec, DEFAULT_QUADRATURE
from quaperture.receivers.distribution import OutcomeDistribution, CfiResult, cfi_from_distribution
from quaperture.scenes import Scene, SceneParametrization, TwoPointParametrization, TwoPointScene
from quaperture.serialization import Serializable
from quaperture.utils.types import array_key, frozen

__all__ = ["Receiver", "AmplitudeReceiver", "RotatedReceiver", "rotate_outputs", "output_sectors", "BUCKET",
           "UnsupportedScene", "NonUnitaryCoefficientsError", "is_unitary"]


logger = logging.getLogger("quaperture.receivers")

#: label of the outcome collecting all light not sorted into an output mode
BUCKET = 'bucket'

UNITARITY_TOLERANCE = 1e-10


def is_unitary(matrix: numpy.ndarray, tolerance: float=UNITARITY_TOLERANCE) -> bool:
    """||c^dagger c - I|| < tolerance for a square matrix c."""
    matrix = numpy.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    deviation = matrix.conj().T @ matrix - numpy.eye(matrix.shape[0])
    return float(numpy.linalg.norm(deviation)) < tolerance


def checked_unitary(matrix: numpy.ndarray, tolerance: float=UNITARITY_TOLERANCE) -> numpy.ndarray:
    matrix = numpy.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonUnitaryCoefficientsError(matrix.shape, float('inf'))
    deviation = float(numpy.linalg.norm(matrix.conj().T @ matrix - numpy.eye(matrix.shape[0])))
    if not deviation < tolerance:
        raise NonUnitaryCoefficientsError(matrix.shape, deviation)
    return frozen(matrix)


class Receiver(Serializable, Comparable):
    """A measurement on single photons of the collected light.

    Receivers are immutable descriptions which are applied to an aperture array and a scene. The scene must record
    the parameter value it was generated for; the parametrization supplies the derivatives of source positions and
    brightnesses and defaults to the symmetric two-point problem for a TwoPointScene.
    """

    @property
    def name(self) -> str:
        """Short name used in output files."""
        return self.type_aliases[0] if self.type_aliases else type(self).__name__

    @abstractmethod
    def distribution(self, array: ApertureArray, scene: Scene,
                     parametrization: Optional[SceneParametrization]=None) -> OutcomeDistribution:
        """Outcome probabilities of a single photon and their derivatives with respect to the parameter."""

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        """Raises if the receiver cannot be applied to the array or scene."""

    def cfi(self, array: ApertureArray, scene: Scene, parametrization: Optional[SceneParametrization]=None, *,
            quadrature: QuadratureSpec=DEFAULT_QUADRATURE) -> CfiResult:
        dist = self.distribution(array, scene, parametrization)
        return cfi_from_distribution(dist, scene.n_photons, quadrature=quadrature, receiver=self, theta=scene.theta,
                                     array=array)

    def _source_derivatives(self, scene: Scene, parametrization: Optional[SceneParametrization]) \
            -> Tuple[numpy.ndarray, numpy.ndarray]:
        if parametrization is None:
            if not isinstance(scene, TwoPointScene):
                raise UnsupportedScene(self, 'a parametrization is required for general scenes')
            parametrization = TwoPointParametrization()
        if scene.theta is None:
            raise UnsupportedScene(self, 'the scene does not record its parameter value')
        dx = numpy.asarray(parametrization.position_derivatives(scene.theta), dtype=float)
        db = numpy.asarray(parametrization.brightness_derivatives(scene.theta), dtype=float)
        if dx.shape != scene.positions.shape or db.shape != scene.positions.shape:
            raise UnsupportedScene(self, 'parametrization and scene have different source counts')
        return dx, db

    def __repr__(self) -> str:
        return '{}()'.format(type(self).__name__)


class AmplitudeReceiver(Receiver):
    """Receiver projecting onto orthonormal output modes.

    Subclasses supply the amplitudes of a displaced compound PSF psi_comp(. - x) in every output. An output may
    collect several orthogonal channels (a multimode detector); its probability is the summed squared modulus over
    channels. With a bucket the remainder 1 - sum_i P_i is an additional outcome.

    Every output records the limit 4 sum_s b_s (dx_s/dtheta)^2 |da_s/dx|^2 of (dP)^2/P which applies where its
    amplitudes vanish. For the bucket the derivative norm is the one of the unsorted part,
    Delta k^2 - sum_i |da_i/dx|^2.
    """

    @property
    def has_bucket(self) -> bool:
        return True

    @abstractmethod
    def output_labels(self, array: ApertureArray) -> List[Any]:
        """Labels of the sorted output modes (without the bucket)."""

    @abstractmethod
    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """Complex amplitudes of psi_comp(. - x) in every output and their x derivatives, both of shape
        (outputs, channels)."""

    def labels(self, array: ApertureArray) -> List[Any]:
        labels = list(self.output_labels(array))
        return labels + [BUCKET] if self.has_bucket else labels

    def distribution(self, array: ApertureArray, scene: Scene,
                     parametrization: Optional[SceneParametrization]=None) -> OutcomeDistribution:
        self.validate(array, scene)
        position_derivatives, brightness_derivatives = self._source_derivatives(scene, parametrization)
        labels = self.output_labels(array)

        probabilities = numpy.zeros(len(labels))
        derivatives = numpy.zeros(len(labels))
        limits = numpy.zeros(len(labels))
        captured = 0.
        captured_derivative_norm = 0.
        for x, b, dx, db in zip(scene.positions, scene.brightness, position_derivatives, brightness_derivatives):
            values, value_derivatives = self.source_amplitudes(array, x)
            weights = numpy.sum(numpy.abs(values) ** 2, axis=1)
            derivative_norms = numpy.sum(numpy.abs(value_derivatives) ** 2, axis=1)
            probabilities += b * weights
            derivatives += db * weights + 2 * b * dx * numpy.sum(numpy.real(values.conj() * value_derivatives),
                                                                  axis=1)
            limits += 4 * b * dx ** 2 * derivative_norms
            captured += b * float(numpy.sum(weights))
            captured_derivative_norm += b * dx ** 2 * (array.momentum_variance - float(numpy.sum(derivative_norms)))

        if not self.has_bucket:
            return OutcomeDistribution(labels, probabilities, derivatives, limits, complete=False)

        bucket = max(0., 1. - captured)
        bucket_derivative = -float(numpy.sum(derivatives))
        bucket_limit = 4 * max(0., captured_derivative_norm)
        return OutcomeDistribution(labels + [BUCKET],
                                   numpy.append(probabilities, bucket),
                                   numpy.append(derivatives, bucket_derivative),
                                   numpy.append(limits, bucket_limit))


class RotatedReceiver(AmplitudeReceiver):
    """An AmplitudeReceiver followed by a fixed unitary acting on the selected output modes.

    The rotated outputs replace the selected ones (in order); all others and the bucket are unchanged. The CFI is
    invariant under real orthogonal rotations of outputs whose amplitudes share their parity and their complex phase
    (see output_sectors); general unitaries may change it.
    """

    type_aliases = ('rotated',)

    def __init__(self, receiver: AmplitudeReceiver, rotation: Any, outputs: Optional[Sequence[int]]=None) -> None:
        if isinstance(rotation, dict):
            rotation = numpy.asarray(rotation['real'], dtype=float) + 1j * numpy.asarray(rotation['imag'],
                                                                                       dtype=float)
        rotation = checked_unitary(rotation)
        if outputs is None:
            outputs = range(rotation.shape[0])
        outputs = tuple(int(i) for i in outputs)
        if len(outputs) != rotation.shape[0] or len(set(outputs)) != len(outputs):
            raise ValueError('The rotation needs one distinct output index per row', outputs, rotation.shape)
        self._receiver = receiver
        self._rotation = rotation
        self._outputs = outputs

    @property
    def receiver(self) -> AmplitudeReceiver:
        return self._receiver

    @property
    def rotation(self) -> numpy.ndarray:
        return self._rotation

    @property
    def outputs(self) -> Tuple[int, ...]:
        return self._outputs

    @property
    def has_bucket(self) -> bool:
        return self._receiver.has_bucket

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        self._receiver.validate(array, scene)
        count = len(self._receiver.output_labels(array))
        if max(self._outputs) >= count:
            raise IndexError('Rotated output index out of range', max(self._outputs), count)

    def output_labels(self, array: ApertureArray) -> List[Any]:
        labels = list(self._receiver.output_labels(array))
        for row, index in enumerate(self._outputs):
            labels[index] = ('rotated', row)
        return labels

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        values, derivatives = self._receiver.source_amplitudes(array, x)
        values = numpy.array(values, dtype=complex)
        derivatives = numpy.array(derivatives, dtype=complex)
        selected = list(self._outputs)
        values[selected] = self._rotation @ values[selected]
        derivatives[selected] = self._rotation @ derivatives[selected]
        return values, derivatives

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['receiver'] = self._receiver
        data['rotation'] = {'real': self._rotation.real.tolist(), 'imag': self._rotation.imag.tolist()}
        data['outputs'] = list(self._outputs)
        return data

    @property
    def compare_key(self) -> Any:
        return self._receiver, array_key(self._rotation), self._outputs

    def __repr__(self) -> str:
        return 'RotatedReceiver({!r}, outputs={})'.format(self._receiver, list(self._outputs))


def rotate_outputs(receiver: AmplitudeReceiver, rotation: numpy.ndarray,
                   outputs: Optional[Sequence[int]]=None) -> RotatedReceiver:
    return RotatedReceiver(receiver, rotation, outputs)


def output_sectors(receiver: AmplitudeReceiver, array: ApertureArray, probe: float=0.3719,
                   tolerance: float=1e-9) -> List[List[int]]:
    """Partition of the single channel outputs into sectors of equal symmetry.

    Two outputs share a sector if their amplitudes have the same parity under x -> -x and the same constant phase
    (real or imaginary), judged at x = +-probe*sigma. Outputs that fit no pattern or vanish at the probe form
    sectors of their own.
    """
    x = probe * array.sigma
    plus, _ = receiver.source_amplitudes(array, x)
    minus, _ = receiver.source_amplitudes(array, -x)
    sectors = {}  # type: Dict[Any, List[int]]
    for index, (a, b) in enumerate(zip(plus, minus)):
        key = ('single', index)  # type: Any
        if a.size == 1 and abs(a[0]) > 1e-200:
            a, b = complex(a[0]), complex(b[0])
            parity = b / a
            phase = a / abs(a)
            if abs(abs(parity.real) - 1) < tolerance and abs(parity.imag) < tolerance:
                if abs(phase.imag) < tolerance:
                    key = (round(parity.real), 'real')
                elif abs(phase.real) < tolerance:
                    key = (round(parity.real), 'imaginary')
        sectors.setdefault(key, []).append(index)
    return list(sectors.values())


class UnsupportedScene(ValueError):
    """The receiver cannot be applied to the given scene or array."""

    def __init__(self, receiver: Any, reason: str) -> None:
        super().__init__()
        self.receiver = receiver
        self.reason = reason

    def __str__(self) -> str:
        return "{!r} is not applicable: {}".format(self.receiver, self.reason)


class NonUnitaryCoefficientsError(ValueError):
    def __init__(self, shape: Tuple[int, ...], deviation: float) -> None:
        super().__init__()
        self.shape = shape
        self.deviation = deviation

    def __str__(self) -> str:
        return "Coefficient matrix of shape {} is not unitary (||c^dagger c - I|| = {:.3g})".format(
            self.shape, self.deviation)
