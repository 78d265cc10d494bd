"""Receivers combining the light of the individual apertures in a beam splitter network (co-axial combination).

The field of aperture mu is decomposed into local modes j. A network with coefficients c_{gamma mu} interferes the
same local mode of all apertures, so output (j, gamma) has the amplitude Gamma_j(x) chi_gamma(x) with

    chi_gamma(x) = n^-1/2 sum_mu conj(c_{gamma mu}) exp(-i alpha_mu x),

and B_gamma(x) = n |chi_gamma(x)|^2 sums to n over gamma for unitary c.
"""
import math
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy

from quaperture.apertures import ApertureArray, require_symmetric
from quaperture.modes import LocalModeBasis, DEFAULT_J_MAX
from quaperture.receivers.base import AmplitudeReceiver, UnsupportedScene, checked_unitary
from quaperture.receivers.distribution import OutcomeDistribution
from quaperture.scenes import Scene, SceneParametrization
from quaperture.utils.types import array_key, frozen

__all__ = ["pairwise_coefficients", "dft_coefficients", "block_coefficients", "identity_coefficients",
           "Groupwise", "TrinarySpade", "LightPipe", "LightPipeReflected", "UniversalCoaxial",
           "universal_coaxial_dist"]


CoefficientSpec = Union[str, numpy.ndarray, Dict[str, Any]]


def pairwise_coefficients(array: ApertureArray) -> numpy.ndarray:
    """50-50 beam splitters between mirror pairs (mu, mu'). Rows alternate between (e_mu + e_mu')/sqrt(2) and
    (e_mu - e_mu')/sqrt(2); the centre aperture of an odd array is passed on unmixed as the last row."""
    require_symmetric(array, 'pairwise combination')
    pairs, center = array.mirror_pairs
    coefficients = numpy.zeros((array.n, array.n), dtype=complex)
    row = 0
    for low, high in pairs:
        coefficients[row, [low, high]] = 1 / math.sqrt(2)
        coefficients[row + 1, low] = 1 / math.sqrt(2)
        coefficients[row + 1, high] = -1 / math.sqrt(2)
        row += 2
    if center is not None:
        coefficients[row, center] = 1
    return frozen(coefficients)


def pairwise_row_labels(array: ApertureArray) -> List[str]:
    pairs, center = array.mirror_pairs
    labels = []
    for low, high in pairs:
        labels.extend(['+{}{}'.format(low, high), '-{}{}'.format(low, high)])
    if center is not None:
        labels.append('c{}'.format(center))
    return labels


def dft_coefficients(n: int) -> numpy.ndarray:
    """n-port Fourier network c_{gamma mu} = exp(-2 pi i gamma mu / n) / sqrt(n)."""
    if int(n) != n or n < 1:
        raise ValueError('The port count must be a positive integer', n)
    indices = numpy.arange(int(n))
    return frozen(numpy.exp(-2j * math.pi * numpy.outer(indices, indices) / n) / math.sqrt(n))


def identity_coefficients(size: int) -> numpy.ndarray:
    return frozen(numpy.eye(size, dtype=complex))


def block_coefficients(coefficients: numpy.ndarray, j_max: int) -> numpy.ndarray:
    """Lift an aperture network c to the universal co-axial input space of (j, mu) local modes.

    Inputs and outputs are ordered aperture (network port) major: d[gamma (J+1) + j, mu (J+1) + l] =
    c[gamma, mu] delta_jl."""
    return frozen(numpy.kron(numpy.asarray(coefficients, dtype=complex), numpy.eye(j_max + 1)))


def _serialize_coefficients(coefficients: CoefficientSpec) -> Any:
    if isinstance(coefficients, str):
        return coefficients
    return {'real': coefficients.real.tolist(), 'imag': coefficients.imag.tolist()}


def _coefficient_matrix(coefficients: CoefficientSpec) -> CoefficientSpec:
    if isinstance(coefficients, str):
        if coefficients not in ('pairwise', 'dft', 'identity'):
            raise ValueError('Unknown coefficient network {!r}'.format(coefficients))
        return coefficients
    if isinstance(coefficients, dict):
        coefficients = numpy.asarray(coefficients['real'], dtype=float) + \
                       1j * numpy.asarray(coefficients.get('imag', 0.), dtype=float)
    return checked_unitary(coefficients)


def _coefficient_key(coefficients: CoefficientSpec) -> Any:
    return coefficients if isinstance(coefficients, str) else array_key(coefficients)


class _NetworkReceiver(AmplitudeReceiver):
    """Common part of receivers interfering the apertures with an n x n network."""

    def __init__(self, coefficients: CoefficientSpec='pairwise') -> None:
        self._coefficients = _coefficient_matrix(coefficients)

    @property
    def coefficients(self) -> CoefficientSpec:
        return self._coefficients

    def network(self, array: ApertureArray) -> numpy.ndarray:
        """The coefficient matrix c_{gamma mu} for the given array."""
        if isinstance(self._coefficients, str):
            if self._coefficients == 'pairwise':
                return pairwise_coefficients(array)
            if self._coefficients == 'dft':
                return dft_coefficients(array.n)
            return identity_coefficients(array.n)
        if self._coefficients.shape != (array.n, array.n):
            raise UnsupportedScene(self, 'the network has {} ports but the array {} apertures'.format(
                self._coefficients.shape[0], array.n))
        return self._coefficients

    def port_labels(self, array: ApertureArray) -> List[Any]:
        if isinstance(self._coefficients, str) and self._coefficients == 'pairwise':
            return pairwise_row_labels(array)
        return list(range(array.n))

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        self.network(array)

    def chi(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """chi_gamma(x) and its x derivative for all ports."""
        phases = numpy.exp(-1j * array.positions * x) / math.sqrt(array.n)
        conjugate = numpy.conj(self.network(array))
        return conjugate @ phases, conjugate @ (-1j * array.positions * phases)

    def interference_factors(self, array: ApertureArray, x: float) -> numpy.ndarray:
        """B_gamma(x) = n |chi_gamma(x)|^2"""
        values, _ = self.chi(array, x)
        return array.n * numpy.abs(values) ** 2

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['coefficients'] = _serialize_coefficients(self._coefficients)
        return data


class Groupwise(_NetworkReceiver):
    """Local mode sorting on every aperture followed by a network interfering equal local modes.

    Outputs (j, gamma) for j <= j_max with P_{j gamma} = (1/n) sum_s b_s B_gamma(x_s) Gamma_j(x_s)^2. Without the
    bucket the distribution is incomplete and only partial CFI sums are meaningful."""

    type_aliases = ('groupwise', 'pairwise')

    def __init__(self, coefficients: CoefficientSpec='pairwise', j_max: int=DEFAULT_J_MAX,
                 with_bucket: bool=True) -> None:
        super().__init__(coefficients)
        if int(j_max) != j_max or j_max < 0:
            raise ValueError('j_max must be a non-negative integer', j_max)
        self._j_max = int(j_max)
        self._with_bucket = bool(with_bucket)

    @property
    def j_max(self) -> int:
        return self._j_max

    @property
    def with_bucket(self) -> bool:
        return self._with_bucket

    @property
    def has_bucket(self) -> bool:
        return self._with_bucket

    def output_labels(self, array: ApertureArray) -> List[Any]:
        ports = self.port_labels(array)
        return [(j, port) for j in range(self._j_max + 1) for port in ports]

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        basis = LocalModeBasis.for_array(array, self._j_max)
        gamma = basis.gamma_table(x)
        gamma_derivative = basis.gamma_derivative_table(x)
        chi, chi_derivative = self.chi(array, x)
        values = numpy.outer(gamma, chi)
        derivatives = numpy.outer(gamma_derivative, chi) + numpy.outer(gamma, chi_derivative)
        return values.reshape(-1, 1), derivatives.reshape(-1, 1)

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['j_max'] = self._j_max
        data['with_bucket'] = self._with_bucket
        return data

    @property
    def compare_key(self) -> Any:
        return _coefficient_key(self._coefficients), self._j_max, self._with_bucket

    def __repr__(self) -> str:
        coefficients = self._coefficients if isinstance(self._coefficients, str) else 'matrix'
        return 'Groupwise(coefficients={!r}, j_max={}, with_bucket={})'.format(coefficients, self._j_max,
                                                                              self._with_bucket)


class TrinarySpade(Groupwise):
    """Two aperture sorter into the symmetric and antisymmetric combination of the zeroth local modes plus the
    bucket."""

    type_aliases = ('trinary', 'trinary_spade')

    def __init__(self) -> None:
        super().__init__('pairwise', j_max=0, with_bucket=True)

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        if array.n != 2:
            raise UnsupportedScene(self, 'the trinary SPADE needs exactly two apertures (got {})'.format(array.n))
        super().validate(array, scene)

    def get_serialization_data(self) -> Dict[str, Any]:
        return {self.type_identifier_name: self.get_type_identifier()}

    @property
    def compare_key(self) -> Any:
        return ()

    def __repr__(self) -> str:
        return 'TrinarySpade()'


class LightPipe(_NetworkReceiver):
    """Multimode light pipes feeding the network; every output port is detected without mode sorting.

    Summing over all local modes leaves P_gamma = (1/n) sum_s b_s B_gamma(x_s) since sum_j Gamma_j^2 = 1."""

    type_aliases = ('lightpipe', 'light_pipe')

    def output_labels(self, array: ApertureArray) -> List[Any]:
        return self.port_labels(array)

    @property
    def has_bucket(self) -> bool:
        return False

    def distribution(self, array: ApertureArray, scene: Scene,
                     parametrization: Optional[SceneParametrization]=None) -> OutcomeDistribution:
        incomplete = super().distribution(array, scene, parametrization)
        return OutcomeDistribution(incomplete.labels, incomplete.probabilities, incomplete.derivatives,
                                   incomplete.limits)

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        chi, chi_derivative = self.chi(array, x)
        return chi.reshape(-1, 1), chi_derivative.reshape(-1, 1)

    @property
    def compare_key(self) -> Any:
        return _coefficient_key(self._coefficients)

    def __repr__(self) -> str:
        coefficients = self._coefficients if isinstance(self._coefficients, str) else 'matrix'
        return 'LightPipe(coefficients={!r})'.format(coefficients)


class LightPipeReflected(AmplitudeReceiver):
    """Light pipes of mirror pairs combined after reflecting one of them, which separates the even and odd part of
    the image field like SLIVER.

    For a pair (mu, mu') the even and odd ports collect (a_{j mu} +- (-1)^j a_{j mu'}) / sqrt(2) for every local
    mode j; local mode j of a centre aperture goes to the port of parity (-1)^j. Modes beyond j_max are collected
    by the bucket."""

    type_aliases = ('lightpipe_reflected',)

    def __init__(self, j_max: int=DEFAULT_J_MAX) -> None:
        if int(j_max) != j_max or j_max < 0:
            raise ValueError('j_max must be a non-negative integer', j_max)
        self._j_max = int(j_max)

    @property
    def j_max(self) -> int:
        return self._j_max

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        require_symmetric(array, 'reflected light pipe')

    def output_labels(self, array: ApertureArray) -> List[Any]:
        return ['even', 'odd']

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        pairs, center = array.mirror_pairs
        values, derivatives = LocalModeBasis.for_array(array, self._j_max).amplitudes(array, x)
        parity = (-1.) ** numpy.arange(self._j_max + 1)

        ports = {+1: ([], []), -1: ([], [])}
        for low, high in pairs:
            for sign in (+1, -1):
                ports[sign][0].append((values[low] + sign * parity * values[high]) / math.sqrt(2))
                ports[sign][1].append((derivatives[low] + sign * parity * derivatives[high]) / math.sqrt(2))
        if center is not None:
            for sign in (+1, -1):
                mask = parity == sign
                ports[sign][0].append(numpy.where(mask, values[center], 0.))
                ports[sign][1].append(numpy.where(mask, derivatives[center], 0.))

        return (numpy.array([numpy.concatenate(ports[+1][0]), numpy.concatenate(ports[-1][0])]),
                numpy.array([numpy.concatenate(ports[+1][1]), numpy.concatenate(ports[-1][1])]))

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['j_max'] = self._j_max
        return data

    @property
    def compare_key(self) -> Any:
        return self._j_max

    def __repr__(self) -> str:
        return 'LightPipeReflected(j_max={})'.format(self._j_max)


class UniversalCoaxial(AmplitudeReceiver):
    """Arbitrary unitary d over the n (j_max + 1) local mode inputs (aperture major), equivalent to SPADE in the
    basis chi_xi = sum_{mu j} d_{xi mu j} |j, mu>. Output xi has the amplitude sum conj(d_{xi mu j}) <j, mu|psi>."""

    type_aliases = ('universal_coaxial', 'universal')

    def __init__(self, coefficients: CoefficientSpec='identity', j_max: int=DEFAULT_J_MAX) -> None:
        if int(j_max) != j_max or j_max < 0:
            raise ValueError('j_max must be a non-negative integer', j_max)
        self._coefficients = _coefficient_matrix(coefficients)
        if isinstance(self._coefficients, str) and self._coefficients == 'dft':
            raise ValueError('The universal co-axial receiver takes a matrix, "identity" or "pairwise"')
        self._j_max = int(j_max)

    @property
    def coefficients(self) -> CoefficientSpec:
        return self._coefficients

    @property
    def j_max(self) -> int:
        return self._j_max

    def network(self, array: ApertureArray) -> numpy.ndarray:
        size = array.n * (self._j_max + 1)
        if isinstance(self._coefficients, str):
            if self._coefficients == 'pairwise':
                return block_coefficients(pairwise_coefficients(array), self._j_max)
            return identity_coefficients(size)
        if self._coefficients.shape != (size, size):
            raise UnsupportedScene(self, 'the network has {} inputs but the array has {} local modes'.format(
                self._coefficients.shape[0], size))
        return self._coefficients

    def validate(self, array: ApertureArray, scene: Scene) -> None:
        self.network(array)

    def output_labels(self, array: ApertureArray) -> List[Any]:
        return list(range(array.n * (self._j_max + 1)))

    def source_amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        values, derivatives = LocalModeBasis.for_array(array, self._j_max).amplitudes(array, x)
        conjugate = numpy.conj(self.network(array))
        return (conjugate @ values.ravel()).reshape(-1, 1), (conjugate @ derivatives.ravel()).reshape(-1, 1)

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['coefficients'] = _serialize_coefficients(self._coefficients)
        data['j_max'] = self._j_max
        return data

    @property
    def compare_key(self) -> Any:
        return _coefficient_key(self._coefficients), self._j_max

    def __repr__(self) -> str:
        coefficients = self._coefficients if isinstance(self._coefficients, str) else 'matrix'
        return 'UniversalCoaxial(coefficients={!r}, j_max={})'.format(coefficients, self._j_max)


def universal_coaxial_dist(array: ApertureArray, scene: Scene, coefficients: CoefficientSpec,
                           parametrization: Optional[SceneParametrization]=None,
                           j_max: Optional[int]=None) -> OutcomeDistribution:
    """Outcome distribution of a universal co-axial receiver. j_max is inferred from the size of a coefficient
    matrix if not given."""
    if j_max is None:
        if isinstance(coefficients, str):
            j_max = DEFAULT_J_MAX
        else:
            size = numpy.asarray(coefficients['real'] if isinstance(coefficients, dict) else coefficients).shape[0]
            if size % array.n:
                raise ValueError('The network size is no multiple of the aperture count', size, array.n)
            j_max = size // array.n - 1
    return UniversalCoaxial(coefficients, j_max).distribution(array, scene, parametrization)
