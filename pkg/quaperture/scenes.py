"""Weak-source scenes (point source constellations with relative brightnesses) and their single parameter
parametrizations theta -> (x_s(theta), b_s(theta))."""
from abc import abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy

from quaperture.comparable import Comparable
from quaperture.expressions import ExpressionScalar
from quaperture.serialization import Serializable
from quaperture.utils.types import ArrayLike, array_key, frozen

__all__ = ["Scene", "TwoPointScene", "SceneParametrization", "TwoPointParametrization", "ExpressionParametrization",
           "SceneError"]


class Scene(Comparable):
    """Point sources at image-plane positions x_s with relative brightnesses b_s (summing to one) and a mean number
    n_photons of detected photons."""

    _NORMALIZATION_TOLERANCE = 1e-12

    def __init__(self, positions: ArrayLike, brightness: ArrayLike, n_photons: float=1.,
                 theta: Optional[float]=None) -> None:
        positions = numpy.atleast_1d(numpy.asarray(positions, dtype=float))
        brightness = numpy.atleast_1d(numpy.asarray(brightness, dtype=float))
        if positions.ndim != 1 or positions.size == 0:
            raise SceneError('at least one source is required', positions)
        if positions.shape != brightness.shape:
            raise SceneError('every source needs exactly one brightness', (positions.size, brightness.size))
        if not numpy.all(numpy.isfinite(positions)):
            raise SceneError('source positions must be finite', positions)
        if not numpy.all(brightness > 0):
            raise SceneError('brightnesses must be positive', brightness)
        if abs(float(numpy.sum(brightness)) - 1) > self._NORMALIZATION_TOLERANCE * brightness.size:
            raise SceneError('brightnesses must sum to one', float(numpy.sum(brightness)))
        if not n_photons > 0:
            raise SceneError('the photon number must be positive', n_photons)
        self._positions = frozen(positions)
        self._brightness = frozen(brightness)
        self._n_photons = float(n_photons)
        self._theta = None if theta is None else float(theta)

    @property
    def theta(self) -> Optional[float]:
        """Parameter value the scene was generated for, if any."""
        return self._theta

    @property
    def positions(self) -> numpy.ndarray:
        return self._positions

    @property
    def brightness(self) -> numpy.ndarray:
        return self._brightness

    @property
    def n_photons(self) -> float:
        return self._n_photons

    @property
    def source_count(self) -> int:
        return self._positions.size

    @property
    def sources(self) -> List[Tuple[float, float]]:
        return list(zip(self._positions.tolist(), self._brightness.tolist()))

    def with_photons(self, n_photons: float) -> 'Scene':
        return Scene(self._positions, self._brightness, n_photons, self._theta)

    @property
    def compare_key(self) -> Any:
        return array_key(self._positions), array_key(self._brightness), self._n_photons, self._theta

    def __repr__(self) -> str:
        return 'Scene(positions={}, brightness={}, n_photons={!r})'.format(
            self._positions.tolist(), self._brightness.tolist(), self._n_photons)


class TwoPointScene(Scene):
    """Two equally bright sources at -theta and +theta (centroid at zero)."""

    def __init__(self, theta: float, n_photons: float=1.) -> None:
        theta = float(theta)
        if not theta >= 0:
            raise SceneError('the half separation theta must not be negative', theta)
        super().__init__([-theta, theta], [.5, .5], n_photons, theta)

    def with_photons(self, n_photons: float) -> 'TwoPointScene':
        return TwoPointScene(self._theta, n_photons)

    def __repr__(self) -> str:
        return 'TwoPointScene(theta={!r}, n_photons={!r})'.format(self._theta, self._n_photons)


class SceneParametrization(Serializable, Comparable):
    """Dependence of source positions and brightnesses on the single estimated parameter theta."""

    @property
    @abstractmethod
    def source_count(self) -> int:
        """Number of sources in every scene of this family."""

    @abstractmethod
    def positions(self, theta: float) -> numpy.ndarray:
        """Source positions x_s(theta)."""

    @abstractmethod
    def brightness(self, theta: float) -> numpy.ndarray:
        """Relative brightnesses b_s(theta)."""

    @abstractmethod
    def position_derivatives(self, theta: float) -> numpy.ndarray:
        """dx_s/dtheta"""

    @abstractmethod
    def brightness_derivatives(self, theta: float) -> numpy.ndarray:
        """db_s/dtheta. Sums to zero."""

    @property
    def is_two_point(self) -> bool:
        return False

    def scene(self, theta: float, n_photons: float=1.) -> Scene:
        return Scene(self.positions(theta), self.brightness(theta), n_photons, theta)


class TwoPointParametrization(SceneParametrization):
    """x = (-theta, +theta), b = (1/2, 1/2)."""

    type_aliases = ('two_point',)

    @property
    def source_count(self) -> int:
        return 2

    def positions(self, theta: float) -> numpy.ndarray:
        return numpy.array([-theta, theta], dtype=float)

    def brightness(self, theta: float) -> numpy.ndarray:
        return numpy.array([.5, .5])

    def position_derivatives(self, theta: float) -> numpy.ndarray:
        return numpy.array([-1., 1.])

    def brightness_derivatives(self, theta: float) -> numpy.ndarray:
        return numpy.zeros(2)

    @property
    def is_two_point(self) -> bool:
        return True

    def scene(self, theta: float, n_photons: float=1.) -> TwoPointScene:
        return TwoPointScene(theta, n_photons)

    @property
    def compare_key(self) -> Any:
        return ()

    def __repr__(self) -> str:
        return 'TwoPointParametrization()'


class ExpressionParametrization(SceneParametrization):
    """Source positions and brightnesses given as expressions in the parameter, e.g.
    ``ExpressionParametrization(positions=['-theta', '2*theta'], brightness=['2/3', '1/3'])``.
    Derivatives are computed symbolically."""

    type_aliases = ('expression',)

    def __init__(self, positions: Sequence[Union[str, float]], brightness: Sequence[Union[str, float]],
                 parameter: str='theta') -> None:
        if len(positions) == 0 or len(positions) != len(brightness):
            raise SceneError('positions and brightness need one expression per source',
                             (len(positions), len(brightness)))
        self._parameter = parameter
        self._positions = tuple(ExpressionScalar(p) for p in positions)
        self._brightness = tuple(ExpressionScalar(b) for b in brightness)
        for expression in self._positions + self._brightness:
            foreign = set(expression.variables) - {parameter}
            if foreign:
                raise SceneError('expressions may only depend on the parameter {}'.format(parameter),
                                 sorted(foreign))
        self._position_derivatives = tuple(p.derivative(parameter) for p in self._positions)
        self._brightness_derivatives = tuple(b.derivative(parameter) for b in self._brightness)

    @property
    def parameter(self) -> str:
        return self._parameter

    @property
    def source_count(self) -> int:
        return len(self._positions)

    @property
    def brightness_only(self) -> bool:
        """True if theta enters only through the brightnesses."""
        return all(p.is_constant() for p in self._positions)

    def _evaluate(self, expressions: Sequence[ExpressionScalar], theta: float) -> numpy.ndarray:
        return numpy.array([float(numpy.real(e.evaluate_numeric(**{self._parameter: theta}))) for e in expressions])

    def positions(self, theta: float) -> numpy.ndarray:
        return self._evaluate(self._positions, theta)

    def brightness(self, theta: float) -> numpy.ndarray:
        return self._evaluate(self._brightness, theta)

    def position_derivatives(self, theta: float) -> numpy.ndarray:
        return self._evaluate(self._position_derivatives, theta)

    def brightness_derivatives(self, theta: float) -> numpy.ndarray:
        return self._evaluate(self._brightness_derivatives, theta)

    def get_serialization_data(self) -> Dict[str, Any]:
        data = super().get_serialization_data()
        data['positions'] = [p.get_serialization_data() for p in self._positions]
        data['brightness'] = [b.get_serialization_data() for b in self._brightness]
        data['parameter'] = self._parameter
        return data

    @property
    def compare_key(self) -> Any:
        return (tuple(str(p) for p in self._positions), tuple(str(b) for b in self._brightness), self._parameter)

    def __repr__(self) -> str:
        return 'ExpressionParametrization(positions={}, brightness={})'.format(
            [str(p) for p in self._positions], [str(b) for b in self._brightness])


class SceneError(ValueError):
    """Invalid scene or parametrization."""

    def __init__(self, reason: str, value) -> None:
        super().__init__()
        self.reason = reason
        self.value = value

    def __str__(self) -> str:
        return "Invalid scene: {} (got {!r})".format(self.reason, self.value)
