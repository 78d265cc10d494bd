"""Mode bases for hard apertures.

Local modes: on an aperture of width delta the sinc-bessel (Legendre) modes
phi~_j(k) = i^j sqrt((2j+1)/delta) P_j(2k/delta) for |k| <= delta/2 are orthonormal. The phase i^j makes the image
plane modes real,

    phi_j(x) = (-1)^j sqrt(2j+1) j_j(pi x/sigma) / sqrt(sigma),

with j_j the spherical Bessel function. The overlap of mode j with a PSF displaced by a is the correlation function
Gamma_j(a) = sqrt(sigma) phi_j(a). Shifting the aperture to alpha_mu multiplies it by exp(-i alpha_mu a).

Compound Gram-Schmidt modes: for a mirror symmetric array the polynomials q_m(k) orthonormal under |psi~_comp(k)|^2 dk
give the modes A_m(k) = i^m q_m(k) psi~_comp(k). A_0 is the compound PSF and A_1 its normalized derivative.
"""
import math
from typing import List, Tuple, Union

import numpy
from scipy import special as scipy_special

from quaperture.apertures import ApertureArray, require_symmetric
from quaperture.numerics.quadrature import gauss_legendre
from quaperture.numerics.special import legendre_table, spherical_bessel
from quaperture.utils.types import ArrayLike, ModeLabel, frozen

__all__ = ["LocalModeBasis", "CompoundGramSchmidt", "mode_k", "mode_x", "gamma_j", "gamma_j_deriv",
           "shifted_gamma", "gram_schmidt", "DEFAULT_J_MAX"]


DEFAULT_J_MAX = 40

_Value = Union[float, complex, numpy.ndarray]


def _unwrap(value: numpy.ndarray) -> _Value:
    return value.item() if value.ndim == 0 else value


def _check_order(j: int) -> int:
    if int(j) != j or j < 0:
        raise ValueError('Mode index must be a non-negative integer', j)
    return int(j)


def mode_k(j: int, k: ArrayLike, delta: float) -> _Value:
    """Aperture-plane local mode phi~_j(k) of an aperture of width delta centred at zero."""
    j = _check_order(j)
    k = numpy.asarray(k, dtype=float)
    t = 2 * k / delta
    inside = numpy.abs(t) <= 1
    values = numpy.zeros(k.shape, dtype=complex)
    values[inside] = legendre_table(j, t[inside])[j]
    return _unwrap(1j ** j * math.sqrt((2 * j + 1) / delta) * values)


def gamma_j(j: int, a: ArrayLike, sigma: float=1.) -> _Value:
    """Gamma_j(a) = (-1)^j sqrt(2j+1) j_j(pi a/sigma)."""
    j = _check_order(j)
    u = math.pi * numpy.asarray(a, dtype=float) / sigma
    return _unwrap((-1) ** j * math.sqrt(2 * j + 1) * numpy.asarray(spherical_bessel(j, u)))


def gamma_j_deriv(j: int, a: ArrayLike, sigma: float=1.) -> _Value:
    j = _check_order(j)
    u = math.pi * numpy.asarray(a, dtype=float) / sigma
    derivative = numpy.asarray(spherical_bessel(j, u, derivative=True))
    return _unwrap((-1) ** j * math.sqrt(2 * j + 1) * math.pi / sigma * derivative)


def mode_x(j: int, x: ArrayLike, sigma: float=1.) -> _Value:
    """Image-plane local mode phi_j(x). Real with parity (-1)^j, phi_0 is the single aperture PSF."""
    return _unwrap(numpy.asarray(gamma_j(j, x, sigma)) / math.sqrt(sigma))


def shifted_gamma(j: int, mu: int, a: ArrayLike, array: ApertureArray) -> _Value:
    """Correlation function of local mode j on aperture mu: exp(-i alpha_mu a) Gamma_j(a)."""
    if not 0 <= mu < array.n:
        raise IndexError('Aperture index out of range', mu, array.n)
    a = numpy.asarray(a, dtype=float)
    return _unwrap(numpy.exp(-1j * array.positions[mu] * a) * numpy.asarray(gamma_j(j, a, array.sigma)))


class LocalModeBasis:
    """The local modes j = 0..j_max of an aperture of width delta, with tabulated correlation functions."""

    def __init__(self, j_max: int=DEFAULT_J_MAX, delta: float=2 * math.pi) -> None:
        if int(j_max) != j_max or j_max < 0:
            raise ValueError('j_max must be a non-negative integer', j_max)
        if not delta > 0:
            raise ValueError('delta must be positive', delta)
        self._j_max = int(j_max)
        self._delta = float(delta)
        self._orders = frozen(numpy.arange(self._j_max + 1))
        self._norms = frozen((-1.) ** self._orders * numpy.sqrt(2 * self._orders + 1))

    @classmethod
    def for_array(cls, array: ApertureArray, j_max: int=DEFAULT_J_MAX) -> 'LocalModeBasis':
        return cls(j_max, array.delta)

    @property
    def j_max(self) -> int:
        return self._j_max

    @property
    def delta(self) -> float:
        return self._delta

    @property
    def sigma(self) -> float:
        return 2 * math.pi / self._delta

    @property
    def size(self) -> int:
        return self._j_max + 1

    def labels(self, n_apertures: int) -> List[ModeLabel]:
        """(j, mu) labels, aperture major."""
        return [(j, mu) for mu in range(n_apertures) for j in range(self._j_max + 1)]

    def gamma_table(self, a: ArrayLike) -> numpy.ndarray:
        """Gamma_j(a) for all j, shape (j_max + 1,) + shape(a)."""
        u = math.pi * numpy.asarray(a, dtype=float) / self.sigma
        orders = self._orders.reshape((-1,) + (1,) * u.ndim)
        return self._norms.reshape(orders.shape) * scipy_special.spherical_jn(orders, u)

    def gamma_derivative_table(self, a: ArrayLike) -> numpy.ndarray:
        u = math.pi * numpy.asarray(a, dtype=float) / self.sigma
        orders = self._orders.reshape((-1,) + (1,) * u.ndim)
        derivative = numpy.asarray(spherical_bessel(orders, u[numpy.newaxis, ...], derivative=True))
        return self._norms.reshape(orders.shape) * math.pi / self.sigma * derivative

    def captured_fraction(self, a: ArrayLike) -> _Value:
        """sum_{j <= j_max} Gamma_j(a)^2, which tends to one as j_max grows."""
        return _unwrap(numpy.sum(self.gamma_table(a) ** 2, axis=0))

    def amplitudes(self, array: ApertureArray, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """Overlaps <j, mu|psi_comp(. - x)> = n^-1/2 exp(-i alpha_mu x) Gamma_j(x) and their x derivatives as
        arrays of shape (n, j_max + 1)."""
        if array.delta != self._delta:
            raise ValueError('Mode basis and aperture array have different widths', self._delta, array.delta)
        gamma = self.gamma_table(x)
        gamma_derivative = self.gamma_derivative_table(x)
        phases = numpy.exp(-1j * array.positions * x)[:, numpy.newaxis] / math.sqrt(array.n)
        alpha = array.positions[:, numpy.newaxis]
        values = phases * gamma[numpy.newaxis, :]
        derivatives = phases * (gamma_derivative[numpy.newaxis, :] - 1j * alpha * gamma[numpy.newaxis, :])
        return values, derivatives

    def __repr__(self) -> str:
        return 'LocalModeBasis(j_max={}, delta={!r})'.format(self._j_max, self._delta)


class CompoundGramSchmidt:
    """Gram-Schmidt mode basis of the compound PSF of a mirror symmetric array.

    q_{m+1} is obtained by orthogonalizing k q_m (multiplication by ik is an image-plane derivative) against all
    previous polynomials twice. The polynomials are tabulated at Gauss-Legendre nodes of every aperture, which
    represent the measure |psi~_comp|^2 dk exactly for polynomial degrees below twice the node count.
    """

    def __init__(self, array: ApertureArray, order: int) -> None:
        require_symmetric(array, 'Gram-Schmidt compound mode basis')
        if int(order) != order or order < 1:
            raise ValueError('The Gram-Schmidt basis needs at least one mode', order)
        self._array = array
        self._order = int(order)

        node_count = max(64, 2 * self._order + 16)
        nodes, weights = zip(*(gauss_legendre(node_count, low, high) for low, high in array.segments))
        self._nodes = numpy.concatenate(nodes)
        self._quadrature_weights = numpy.concatenate(weights)
        self._density = 1 / (array.n * array.delta)
        measure = self._quadrature_weights * self._density

        scale = float(numpy.max(numpy.abs(self._nodes)))
        scaled = self._nodes / scale
        polynomials = numpy.zeros((self._order, self._nodes.size))
        polynomials[0] = 1 / math.sqrt(numpy.sum(measure))
        for m in range(1, self._order):
            candidate = scaled * polynomials[m - 1]
            for _ in range(2):
                projections = polynomials[:m] @ (measure * candidate)
                candidate = candidate - projections @ polynomials[:m]
            norm = math.sqrt(float(numpy.sum(measure * candidate ** 2)))
            if norm < 1e-13:
                raise ValueError('Gram-Schmidt basis order exceeds the numerical rank', order, m)
            polynomials[m] = candidate / norm
        self._polynomials = frozen(polynomials)
        self._measure = frozen(measure)
        self._phase = frozen((-1j) ** numpy.arange(self._order))

    @property
    def array(self) -> ApertureArray:
        return self._array

    @property
    def order(self) -> int:
        return self._order

    @property
    def nodes(self) -> numpy.ndarray:
        return self._nodes

    @property
    def polynomials(self) -> numpy.ndarray:
        """q_m at the quadrature nodes, shape (order, nodes)."""
        return self._polynomials

    def gram_matrix(self) -> numpy.ndarray:
        """<A_m|A_l> = i^(l-m) int q_m q_l |psi~|^2 dk"""
        phases = 1j ** numpy.arange(self._order)
        weighted = self._polynomials * self._measure
        return numpy.conj(phases)[:, numpy.newaxis] * (weighted @ self._polynomials.T) * phases[numpy.newaxis, :]

    def amplitudes(self, x: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """Overlaps a_m(x) = <A_m|psi_comp(. - x)> = (-i)^m int q_m |psi~|^2 exp(-ikx) dk and their x
        derivatives."""
        phase = numpy.exp(-1j * self._nodes * x) * self._measure
        values = self._phase * (self._polynomials @ phase)
        derivatives = self._phase * (self._polynomials @ (-1j * self._nodes * phase))
        return values, derivatives

    def mode_function(self, m: int, x: ArrayLike) -> _Value:
        """Image-plane mode A_m(x) = (2 pi)^-1/2 int i^m q_m(k) psi~(k) exp(ikx) dk. Real for symmetric arrays."""
        if not 0 <= m < self._order:
            raise IndexError('Mode index out of range', m, self._order)
        x = numpy.asarray(x, dtype=float)
        exponent = numpy.exp(1j * numpy.multiply.outer(x, self._nodes))
        integral = exponent @ (self._quadrature_weights * self._polynomials[m])
        value = 1j ** m * math.sqrt(self._density) * integral / math.sqrt(2 * math.pi)
        return _unwrap(numpy.real(value))

    def __repr__(self) -> str:
        return 'CompoundGramSchmidt({!r}, order={})'.format(self._array, self._order)


def gram_schmidt(array: ApertureArray, order: int) -> CompoundGramSchmidt:
    return CompoundGramSchmidt(array, order)
