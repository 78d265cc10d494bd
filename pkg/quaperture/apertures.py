"""Aperture-plane geometry of one-dimensional hard aperture arrays, their point spread functions (PSFs) and PSF
autocorrelation functions.

Conventions: an image-plane amplitude is psi(x) = (2 pi)^-1/2 int psi~(k) exp(ikx) dk. A single aperture of width
delta centred at zero has psi~ = delta^-1/2 on |k| <= delta/2, which gives the Rayleigh scale sigma = 2 pi / delta and
psi_1ap(x) = sqrt(sigma) sin(pi x/sigma)/(pi x). An array of n equal apertures centred at alpha_mu has the compound
PSF psi_comp(x) = n^-1/2 psi_1ap(x) sum_mu exp(i alpha_mu x) and the autocorrelation
Gamma(a) = int psi_comp*(x) psi_comp(x - a) dx = (1/n) Gamma_1ap(a) sum_mu exp(-i alpha_mu a).

Removable singularities at x = 0 are evaluated with Taylor series inside a configurable patch radius.
"""
import math
from numbers import Real
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy
from cached_property import cached_property

from quaperture.comparable import Comparable
from quaperture.numerics.quadrature import gauss_legendre
from quaperture.utils.types import ArrayLike, array_key, frozen

__all__ = ["ApertureArray", "make_array", "single_aperture", "two_aperture", "linear_array",
           "psf_single", "psf_single_derivative", "psf_compound", "psf_compound_derivative",
           "autocorr_single", "autocorr_single_derivs", "autocorr_compound", "autocorr_derivs",
           "require_symmetric", "ApertureGeometryError", "SymmetricArrayRequired", "DEFAULT_PATCH_RADIUS"]


#: radius of the Taylor patches in units of sigma
DEFAULT_PATCH_RADIUS = 1e-4

# j1 and j1' lose digits to cancellation well outside the value patch
_DERIVATIVE_SERIES_RADIUS = 0.05

_Scalar = Union[float, complex]
_Value = Union[_Scalar, numpy.ndarray]


def _unwrap(value: numpy.ndarray) -> _Value:
    return value.item() if value.ndim == 0 else value


def _j0(u: numpy.ndarray, radius: float) -> numpy.ndarray:
    """sin(u)/u with 5th order series on |u| < radius."""
    u2 = u * u
    series = 1 - u2 / 6 + u2 * u2 / 120
    return numpy.where(numpy.abs(u) < radius, series, numpy.sinc(u / math.pi))


def _j1(u: numpy.ndarray) -> numpy.ndarray:
    u2 = u * u
    series = u * (1 / 3 - u2 / 30 + u2 ** 2 / 840 - u2 ** 3 / 45360 + u2 ** 4 / 3991680)
    small = numpy.abs(u) < _DERIVATIVE_SERIES_RADIUS
    safe = numpy.where(small, 1., u)
    closed = numpy.sin(safe) / safe ** 2 - numpy.cos(safe) / safe
    return numpy.where(small, series, closed)


def _j1_prime(u: numpy.ndarray) -> numpy.ndarray:
    u2 = u * u
    series = 1 / 3 - u2 / 10 + u2 ** 2 / 168 - u2 ** 3 / 6480 + u2 ** 4 / 443520
    small = numpy.abs(u) < _DERIVATIVE_SERIES_RADIUS
    safe = numpy.where(small, 1., u)
    closed = numpy.sinc(safe / math.pi) - 2 * _j1(safe) / safe
    return numpy.where(small, series, closed)


def psf_single(x: ArrayLike, sigma: float=1., patch_radius: float=DEFAULT_PATCH_RADIUS) -> _Value:
    """Real PSF amplitude of a single hard aperture sqrt(sigma) sin(pi x/sigma)/(pi x)."""
    u = math.pi * numpy.asarray(x, dtype=float) / sigma
    return _unwrap(_j0(u, math.pi * patch_radius) / math.sqrt(sigma))


def psf_single_derivative(x: ArrayLike, sigma: float=1.) -> _Value:
    u = math.pi * numpy.asarray(x, dtype=float) / sigma
    return _unwrap(-math.pi / sigma ** 1.5 * _j1(u))


def autocorr_single(a: ArrayLike, sigma: float=1., patch_radius: float=DEFAULT_PATCH_RADIUS) -> _Value:
    """Gamma_1ap(a) = sigma sin(pi a/sigma)/(pi a)."""
    u = math.pi * numpy.asarray(a, dtype=float) / sigma
    return _unwrap(_j0(u, math.pi * patch_radius))


def autocorr_single_derivs(a: ArrayLike, sigma: float=1.,
                           patch_radius: float=DEFAULT_PATCH_RADIUS) -> Tuple[_Value, _Value, _Value]:
    """Gamma_1ap and its first two derivatives with respect to a."""
    u = math.pi * numpy.asarray(a, dtype=float) / sigma
    scale = math.pi / sigma
    return (_unwrap(_j0(u, math.pi * patch_radius)),
            _unwrap(-scale * _j1(u)),
            _unwrap(-scale ** 2 * _j1_prime(u)))


class ApertureArray(Comparable):
    """Immutable geometry of n equal hard apertures of width delta centred at positions alpha_mu.

    Positions and width are dimensionless (aperture-plane length over wavelength). The centroid must be zero and
    apertures must not overlap.
    """

    _CENTROID_TOLERANCE = 1e-12

    def __init__(self, positions: ArrayLike, delta: float, patch_radius: float=DEFAULT_PATCH_RADIUS) -> None:
        positions = numpy.atleast_1d(numpy.asarray(positions, dtype=float))
        if positions.ndim != 1 or positions.size == 0:
            raise ApertureGeometryError('at least one aperture position is required', positions)
        if not isinstance(delta, Real) or not delta > 0 or not math.isfinite(delta):
            raise ApertureGeometryError('the aperture width must be positive and finite', delta)
        if not numpy.all(numpy.isfinite(positions)):
            raise ApertureGeometryError('aperture positions must be finite', positions)
        if not patch_radius > 0:
            raise ValueError('patch_radius must be positive', patch_radius)

        scale = max(float(delta), float(numpy.max(numpy.abs(positions))))
        if abs(float(numpy.sum(positions))) > self._CENTROID_TOLERANCE * scale * positions.size:
            raise ApertureGeometryError('the mean aperture position must be zero', positions)

        ordered = numpy.sort(positions)
        if numpy.any(numpy.diff(ordered) < float(delta) * (1 - 1e-12)):
            raise ApertureGeometryError('apertures overlap', positions)

        self._positions = frozen(positions)
        self._delta = float(delta)
        self._patch_radius = float(patch_radius)

    @property
    def positions(self) -> numpy.ndarray:
        """Aperture centres alpha_mu in construction order."""
        return self._positions

    @property
    def delta(self) -> float:
        return self._delta

    @property
    def patch_radius(self) -> float:
        return self._patch_radius

    @property
    def n(self) -> int:
        return self._positions.size

    @property
    def sigma(self) -> float:
        return 2 * math.pi / self._delta

    @cached_property
    def r_mu(self) -> numpy.ndarray:
        return frozen(self._positions / self._delta)

    @property
    def baseline(self) -> float:
        """Centre to centre distance beta of a two aperture array."""
        if self.n != 2:
            raise ApertureGeometryError('the baseline is only defined for two apertures', self._positions)
        return abs(float(self._positions[1] - self._positions[0]))

    @property
    def r(self) -> float:
        """Baseline ratio beta/delta of a two aperture array."""
        return self.baseline / self._delta

    @cached_property
    def mirror_pairs(self) -> Optional[Tuple[Tuple[Tuple[int, int], ...], Optional[int]]]:
        """((mu, mu') pairs with alpha_mu' = -alpha_mu and alpha_mu < 0, index of the centre aperture) or None if the
        array is not mirror symmetric."""
        order = numpy.argsort(self._positions, kind='stable')
        scale = max(self._delta, float(numpy.max(numpy.abs(self._positions))))
        tolerance = 1e-12 * scale
        pairs = []  # type: List[Tuple[int, int]]
        center = None
        for low, high in zip(order, order[::-1]):
            if low == high:
                if abs(self._positions[low]) > tolerance:
                    return None
                center = int(low)
                break
            if self._positions[low] >= 0:
                break
            if abs(self._positions[low] + self._positions[high]) > tolerance:
                return None
            pairs.append((int(low), int(high)))
        return tuple(pairs), center

    @property
    def is_symmetric(self) -> bool:
        return self.mirror_pairs is not None

    @cached_property
    def mean_square_position(self) -> float:
        """(1/n) sum_mu alpha_mu^2"""
        return float(numpy.mean(self._positions ** 2))

    @property
    def momentum_variance(self) -> float:
        """Delta k^2 = int k^2 |psi~|^2 dk = -Gamma''(0) = (1/n) sum alpha^2 + delta^2/12"""
        return self.mean_square_position + self._delta ** 2 / 12

    @property
    def segments(self) -> List[Tuple[float, float]]:
        """Aperture-plane supports [alpha_mu - delta/2, alpha_mu + delta/2] in construction order."""
        half = self._delta / 2
        return [(float(alpha) - half, float(alpha) + half) for alpha in self._positions]

    def aperture_intensity(self, k: ArrayLike) -> _Value:
        """|psi~_comp(k)|^2, which is 1/(n delta) on every aperture and zero elsewhere."""
        k = numpy.asarray(k, dtype=float)
        inside = numpy.zeros(k.shape, dtype=bool)
        for low, high in self.segments:
            inside |= (k >= low) & (k <= high)
        return _unwrap(numpy.where(inside, 1 / (self.n * self._delta), 0.))

    def aperture_integral(self, integrand: Callable[[numpy.ndarray], numpy.ndarray], order: int=96) -> _Scalar:
        """int integrand(k) |psi~_comp(k)|^2 dk with Gauss-Legendre quadrature on every aperture.

        The integrand must be smooth on each aperture (polynomials times oscillating exponentials)."""
        total = 0j
        weight = 1 / (self.n * self._delta)
        for low, high in self.segments:
            nodes, weights = gauss_legendre(order, low, high)
            total += weight * numpy.sum(weights * numpy.asarray(integrand(nodes)))
        return total.real if total.imag == 0 else total

    def _phase_sums(self, x: numpy.ndarray, sign: int) -> Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
        alpha = self._positions.reshape((-1,) + (1,) * x.ndim)
        phases = numpy.exp(sign * 1j * alpha * x)
        return (numpy.sum(phases, axis=0),
                numpy.sum(sign * 1j * alpha * phases, axis=0),
                numpy.sum(-alpha ** 2 * phases, axis=0))

    def psf(self, x: ArrayLike) -> _Value:
        x = numpy.asarray(x, dtype=float)
        phase_sum, _, _ = self._phase_sums(x, +1)
        single = _j0(math.pi * x / self.sigma, math.pi * self._patch_radius) / math.sqrt(self.sigma)
        return _unwrap(single * phase_sum / math.sqrt(self.n))

    def psf_derivative(self, x: ArrayLike) -> _Value:
        x = numpy.asarray(x, dtype=float)
        phase_sum, phase_sum_derivative, _ = self._phase_sums(x, +1)
        single = _j0(math.pi * x / self.sigma, math.pi * self._patch_radius) / math.sqrt(self.sigma)
        single_derivative = numpy.asarray(psf_single_derivative(x, self.sigma))
        return _unwrap((single_derivative * phase_sum + single * phase_sum_derivative) / math.sqrt(self.n))

    def _interference(self, x: numpy.ndarray) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """|sum_mu exp(i alpha_mu x)|^2 = n + 2 sum_{mu>nu} cos((alpha_mu - alpha_nu) x) and its x derivative."""
        value = numpy.full(x.shape, float(self.n))
        derivative = numpy.zeros(x.shape)
        for mu in range(self.n):
            for nu in range(mu):
                difference = self._positions[mu] - self._positions[nu]
                value += 2 * numpy.cos(difference * x)
                derivative -= 2 * difference * numpy.sin(difference * x)
        return value, derivative

    def intensity(self, x: ArrayLike) -> _Value:
        """|psi_comp(x)|^2"""
        x = numpy.asarray(x, dtype=float)
        single = _j0(math.pi * x / self.sigma, math.pi * self._patch_radius) / math.sqrt(self.sigma)
        interference, _ = self._interference(x)
        return _unwrap(single ** 2 * interference / self.n)

    def intensity_derivative(self, x: ArrayLike) -> _Value:
        x = numpy.asarray(x, dtype=float)
        single = _j0(math.pi * x / self.sigma, math.pi * self._patch_radius) / math.sqrt(self.sigma)
        single_derivative = numpy.asarray(psf_single_derivative(x, self.sigma))
        interference, interference_derivative = self._interference(x)
        return _unwrap((2 * single * single_derivative * interference + single ** 2 * interference_derivative)
                       / self.n)

    def autocorr(self, a: ArrayLike) -> _Value:
        return self.autocorr_derivs(a)[0]

    def autocorr_derivs(self, a: ArrayLike) -> Tuple[_Value, _Value, _Value]:
        """Gamma_comp(a), Gamma_comp'(a) and Gamma_comp''(a). Real for symmetric arrays."""
        a = numpy.asarray(a, dtype=float)
        g0, g1, g2 = (numpy.asarray(v) for v in autocorr_single_derivs(a, self.sigma, self._patch_radius))
        e0, e1, e2 = self._phase_sums(a, -1)
        values = (g0 * e0 / self.n,
                  (g1 * e0 + g0 * e1) / self.n,
                  (g2 * e0 + 2 * g1 * e1 + g0 * e2) / self.n)
        if self.is_symmetric:
            values = tuple(v.real for v in values)
        return tuple(_unwrap(numpy.asarray(v)) for v in values)

    @property
    def compare_key(self) -> Tuple:
        return array_key(self._positions), self._delta, self._patch_radius

    def __repr__(self) -> str:
        return 'ApertureArray(positions={}, delta={!r})'.format(self._positions.tolist(), self._delta)


def make_array(positions: Sequence[float], delta: float, patch_radius: float=DEFAULT_PATCH_RADIUS) -> ApertureArray:
    """Validated aperture array. A non-zero centroid is an error and never corrected silently."""
    return ApertureArray(positions, delta, patch_radius=patch_radius)


def single_aperture(sigma: float=1.) -> ApertureArray:
    return ApertureArray([0.], 2 * math.pi / sigma)


def two_aperture(r: float, sigma: float=1.) -> ApertureArray:
    """Two apertures at +-beta/2 with baseline ratio r = beta/delta >= 1."""
    delta = 2 * math.pi / sigma
    beta = r * delta
    return ApertureArray([-beta / 2, beta / 2], delta)


def linear_array(n: int, spacing_ratio: float, sigma: float=1.) -> ApertureArray:
    """n apertures with equal centre spacing spacing_ratio * delta, centred at zero."""
    if n < 1:
        raise ApertureGeometryError('at least one aperture position is required', n)
    delta = 2 * math.pi / sigma
    positions = (numpy.arange(n) - (n - 1) / 2) * spacing_ratio * delta
    return ApertureArray(positions, delta)


def psf_compound(array: ApertureArray, x: ArrayLike) -> _Value:
    return array.psf(x)


def psf_compound_derivative(array: ApertureArray, x: ArrayLike) -> _Value:
    return array.psf_derivative(x)


def autocorr_compound(array: ApertureArray, a: ArrayLike) -> _Value:
    return array.autocorr(a)


def autocorr_derivs(array: ApertureArray, a: ArrayLike) -> Tuple[_Value, _Value, _Value]:
    return array.autocorr_derivs(a)


def require_symmetric(array: ApertureArray, operation: str) -> None:
    if not array.is_symmetric:
        raise SymmetricArrayRequired(operation, array)


class ApertureGeometryError(ValueError):
    """Invalid aperture array description."""

    def __init__(self, reason: str, value) -> None:
        super().__init__()
        self.reason = reason
        self.value = value

    def __str__(self) -> str:
        return "Invalid aperture geometry: {} (got {!r})".format(self.reason, self.value)


class SymmetricArrayRequired(ValueError):
    """An operation that is only derived for mirror symmetric arrays was called with an asymmetric one."""

    def __init__(self, operation: str, array: ApertureArray) -> None:
        super().__init__()
        self.operation = operation
        self.array = array

    def __str__(self) -> str:
        return "{} requires a mirror symmetric aperture array but got positions {}".format(
            self.operation, self.array.positions.tolist())
