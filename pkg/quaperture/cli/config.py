"""Run configuration of the command line interface.

A run is described by a single JSON document. All sections are optional; missing keys take the defaults below and
unknown keys are rejected. Numbers may be given as expression strings like ``"2*pi"``.

.. code-block:: json

    {
        "array": {"units": "sigma", "n": 2, "r": 1.71},
        "scene": {"parametrization": "two_point", "n_photons": 1},
        "receivers": ["direct_imaging", "binspade0", "trinary", {"#type": "groupwise", "j_max": 10}],
        "sweep": {"theta": {"start": 0.01, "stop": 1, "num": 100}, "r": [1, 2, 3]},
        "quadrature": {"rel_tol": 1e-10},
        "modes": {"j_max": 40},
        "simulation": {"mode": "crb", "receiver": "trinary", "theta_true": 0.1, "n_photons": 100000},
        "seed": 0,
        "output": {"directory": "out"}
    }

Array geometry is given either in sigma units (``"units": "sigma"`` with the baseline ratio ``r`` of n equally
spaced apertures or explicit ``positions`` in units of the aperture width) or physically (``"units": "physical"``
with ``diameter_m``, ``wavelength_um`` and ``centres_m`` or ``baseline_m``). In physical units all angles of the
sweep and simulation sections are milliarcseconds; internally everything is converted to sigma units.
"""
import copy
import hashlib
import json
import math
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy

import quaperture.receivers  # registers the receiver type names
from quaperture.apertures import ApertureArray, linear_array, two_aperture
from quaperture.expressions import evaluate_expression
from quaperture.numerics.quadrature import QuadratureSpec
from quaperture.receivers.base import Receiver
from quaperture.scenes import SceneParametrization
from quaperture.serialization import Serializable, dumps, loads
from quaperture.units import UnitConversion, physical_array, physical_conversion
from quaperture.utils import checked_int_cast

__all__ = ["RunConfig", "load_config", "DEFAULTS", "ConfigurationError"]


DEFAULT_RECEIVERS = ['direct_imaging', 'binspade0', 'binspade1', 'sliver', 'trinary', 'groupwise', 'lightpipe']

DEFAULTS = {
    'array': {'units': 'sigma', 'n': 2, 'r': 2, 'positions': None,
              'diameter_m': None, 'wavelength_um': None, 'centres_m': None, 'baseline_m': None},
    'scene': {'parametrization': 'two_point', 'n_photons': 1},
    'receivers': DEFAULT_RECEIVERS,
    'sweep': {'theta': {'start': 0.01, 'stop': 1, 'num': 100},
              'r': [1, 2, 3],
              'theta_max_bracket': [1e-3, 1],
              'theta_max_grid': 200},
    'quadrature': {'rel_tol': 1e-10, 'abs_tol': 1e-12, 'domain_halfwidth': 50, 'max_subdivisions': 200},
    'modes': {'j_max': 40, 'eig_method': 'jacobi', 'allow_truncation': False, 'truncation_tolerance': 1e-4},
    'simulation': {'mode': 'crb', 'receiver': 'trinary', 'theta_true': 0.1, 'n_photons': 100000,
                   'n_trials': 500, 'alpha': 0.5, 'alphas': None, 'bracket': None, 'stream_id': 0},
    'seed': 0,
    'output': {'directory': 'quaperture-out'},
}  # type: Dict[str, Any]

_UNITS = ('sigma', 'physical')
_SIMULATION_MODES = ('crb', 'two_stage')
_EIG_METHODS = ('jacobi', 'lapack')


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(path, 'expected a number', value)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return evaluate_expression(value, path)
        except Exception as error:
            raise ConfigurationError(path, 'not a constant expression', value) from error
    raise ConfigurationError(path, 'expected a number or an expression string', value)


def _integer(value: Any, path: str, minimum: int=0) -> int:
    number = _number(value, path)
    try:
        number = checked_int_cast(number)
    except ValueError as error:
        raise ConfigurationError(path, 'expected an integer', value) from error
    if number < minimum:
        raise ConfigurationError(path, 'expected an integer >= {}'.format(minimum), value)
    return number


def _grid(value: Any, path: str) -> List[float]:
    """A list of numbers or a range {"start", "stop", "num"} (linspace) or {"start", "stop", "step"}."""
    if isinstance(value, (list, tuple)):
        if not value:
            raise ConfigurationError(path, 'grid is empty', value)
        return [_number(entry, '{}[{}]'.format(path, i)) for i, entry in enumerate(value)]
    if isinstance(value, dict):
        keys = set(value)
        if keys == {'start', 'stop', 'num'}:
            return numpy.linspace(_number(value['start'], path + '.start'), _number(value['stop'], path + '.stop'),
                                  _integer(value['num'], path + '.num', 1)).tolist()
        if keys == {'start', 'stop', 'step'}:
            start, stop = _number(value['start'], path + '.start'), _number(value['stop'], path + '.stop')
            step = _number(value['step'], path + '.step')
            if not step > 0 or stop < start:
                raise ConfigurationError(path, 'range needs step > 0 and stop >= start', value)
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        raise ConfigurationError(path, 'a range needs the keys start, stop and num or step', sorted(keys))
    return [_number(value, path)]


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    defaults = DEFAULTS[name]
    given = data.get(name, {})
    if not isinstance(given, dict):
        raise ConfigurationError(name, 'expected an object', given)
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigurationError(name, 'unknown keys {}'.format(', '.join(sorted(unknown))), given)
    merged = copy.deepcopy(defaults)
    merged.update(given)
    return merged


def _serializable(entry: Union[str, Dict[str, Any]], path: str) -> Serializable:
    if isinstance(entry, str):
        entry = {Serializable.type_identifier_name: entry}
    if not isinstance(entry, dict) or Serializable.type_identifier_name not in entry:
        raise ConfigurationError(path, 'expected a type name or an object with a "#type" entry', entry)
    try:
        return loads(json.dumps(entry))
    except (TypeError, ValueError) as error:
        raise ConfigurationError(path, str(error), entry) from error


def _receiver(entry: Union[str, Dict[str, Any]], path: str) -> Receiver:
    receiver = _serializable(entry, path)
    if not isinstance(receiver, Receiver):
        raise ConfigurationError(path, 'not a receiver', entry)
    return receiver


class RunConfig:
    """Validated, fully defaulted run configuration. Lengths and angles are stored in sigma units."""

    def __init__(self, data: Optional[Dict[str, Any]]=None) -> None:
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise ConfigurationError('', 'the configuration must be a JSON object', type(data).__name__)
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigurationError('', 'unknown keys {}'.format(', '.join(sorted(unknown))), sorted(data))

        self._array = _section(data, 'array')
        self._scene = _section(data, 'scene')
        self._sweep = _section(data, 'sweep')
        self._quadrature_section = _section(data, 'quadrature')
        self._modes = _section(data, 'modes')
        self._simulation = _section(data, 'simulation')
        self._output = _section(data, 'output')
        receivers = data.get('receivers', DEFAULTS['receivers'])
        if not isinstance(receivers, list) or not receivers:
            raise ConfigurationError('receivers', 'expected a non-empty list', receivers)
        self._receiver_entries = receivers
        self.seed = _integer(data.get('seed', DEFAULTS['seed']), 'seed')
        if self.seed >= 2 ** 64:
            raise ConfigurationError('seed', 'must be an unsigned 64 bit integer', self.seed)

        self.conversion = self._parse_conversion()
        self.receivers = [_receiver(entry, 'receivers[{}]'.format(i)) for i, entry in enumerate(receivers)]
        self.parametrization = _serializable(self._scene['parametrization'], 'scene.parametrization')
        if not isinstance(self.parametrization, SceneParametrization):
            raise ConfigurationError('scene.parametrization', 'not a scene parametrization',
                                     self._scene['parametrization'])
        self.n_photons = _number(self._scene['n_photons'], 'scene.n_photons')
        if not self.n_photons > 0:
            raise ConfigurationError('scene.n_photons', 'must be positive', self.n_photons)

        self.theta_grid = [self._angle(theta) for theta in _grid(self._sweep['theta'], 'sweep.theta')]
        if any(not theta > 0 for theta in self.theta_grid):
            raise ConfigurationError('sweep.theta', 'all values must be positive', self.theta_grid)
        self.r_grid = _grid(self._sweep['r'], 'sweep.r') if self._sweep['r'] is not None else None
        bracket = _grid(self._sweep['theta_max_bracket'], 'sweep.theta_max_bracket')
        if len(bracket) != 2 or not 0 < bracket[0] < bracket[1]:
            raise ConfigurationError('sweep.theta_max_bracket', 'expected [low, high] with 0 < low < high', bracket)
        self.theta_max_bracket = (self._angle(bracket[0]), self._angle(bracket[1]))
        self.theta_max_grid = _integer(self._sweep['theta_max_grid'], 'sweep.theta_max_grid', 2)

        self.quadrature = self._parse_quadrature()
        self.j_max = _integer(self._modes['j_max'], 'modes.j_max')
        if self._modes['eig_method'] not in _EIG_METHODS:
            raise ConfigurationError('modes.eig_method', 'expected one of {}'.format(_EIG_METHODS),
                                     self._modes['eig_method'])
        self.eig_method = self._modes['eig_method']
        self.allow_truncation = bool(self._modes['allow_truncation'])
        self.truncation_tolerance = _number(self._modes['truncation_tolerance'], 'modes.truncation_tolerance')

        self.array = self._build_array(self._r_default())
        self._validate_simulation()
        self.output_directory = str(self._output['directory'])

    def _parse_conversion(self) -> Optional[UnitConversion]:
        units = self._array['units']
        if units not in _UNITS:
            raise ConfigurationError('array.units', 'expected one of {}'.format(_UNITS), units)
        if units == 'sigma':
            return None
        if self._array['diameter_m'] is None or self._array['wavelength_um'] is None:
            raise ConfigurationError('array', 'physical units need diameter_m and wavelength_um', self._array)
        return physical_conversion(_number(self._array['diameter_m'], 'array.diameter_m'),
                                   _number(self._array['wavelength_um'], 'array.wavelength_um'))

    def _parse_quadrature(self) -> QuadratureSpec:
        section = self._quadrature_section
        try:
            return QuadratureSpec(_number(section['rel_tol'], 'quadrature.rel_tol'),
                                  _number(section['abs_tol'], 'quadrature.abs_tol'),
                                  _number(section['domain_halfwidth'], 'quadrature.domain_halfwidth'),
                                  _integer(section['max_subdivisions'], 'quadrature.max_subdivisions', 1))
        except ConfigurationError:
            raise
        except ValueError as error:
            raise ConfigurationError('quadrature', str(error), section) from error

    def _angle(self, value: float) -> float:
        """Sweep and simulation angles are milliarcseconds in physical units."""
        return self.conversion.mas_to_sigma(value) if self.conversion is not None else value

    @property
    def explicit_geometry(self) -> bool:
        """True if the aperture positions are given explicitly, which fixes the array for all commands."""
        return self.conversion is not None or self._array['positions'] is not None

    def _r_default(self) -> float:
        return _number(self._array['r'], 'array.r')

    def _build_array(self, r: float) -> ApertureArray:
        array = self._array
        try:
            if self.conversion is not None:
                diameter = self.conversion.diameter_m
                if array['centres_m'] is not None:
                    centres = [_number(c, 'array.centres_m') for c in array['centres_m']]
                elif array['baseline_m'] is not None:
                    baseline = _number(array['baseline_m'], 'array.baseline_m')
                    centres = [-baseline / 2, baseline / 2]
                else:
                    raise ConfigurationError('array', 'physical units need centres_m or baseline_m', array)
                return physical_array(centres, diameter)
            if array['positions'] is not None:
                delta = 2 * math.pi
                return ApertureArray([delta * _number(p, 'array.positions') for p in array['positions']], delta)
            n = _integer(array['n'], 'array.n', 1)
            return two_aperture(r) if n == 2 else linear_array(n, r)
        except ConfigurationError:
            raise
        except ValueError as error:
            raise ConfigurationError('array', str(error), array) from error

    def arrays(self) -> List[Tuple[float, ApertureArray]]:
        """(r, array) for every point of the r grid. Explicit geometries give a single array; its r is the
        baseline ratio for two apertures and nan otherwise."""
        if self.explicit_geometry or self.r_grid is None:
            r = self.array.r if self.array.n == 2 else math.nan
            return [(r, self.array)]
        return [(r, self._build_array(r)) for r in self.r_grid]

    def two_aperture_ratios(self) -> List[float]:
        """Baseline ratios of the two aperture arrays evaluated by theta-max sweeps."""
        ratios = [r for r, array in self.arrays() if array.n == 2]
        if not ratios:
            raise ConfigurationError('array', 'theta_max is defined for two aperture arrays only', self._array)
        return ratios

    def _validate_simulation(self) -> None:
        section = self._simulation
        if section['mode'] not in _SIMULATION_MODES:
            raise ConfigurationError('simulation.mode', 'expected one of {}'.format(_SIMULATION_MODES),
                                     section['mode'])
        self.simulation_mode = section['mode']
        self.simulation_receiver = _receiver(section['receiver'], 'simulation.receiver')
        self.theta_true = self._angle(_number(section['theta_true'], 'simulation.theta_true'))
        self.simulation_photons = _integer(section['n_photons'], 'simulation.n_photons', 1)
        self.n_trials = _integer(section['n_trials'], 'simulation.n_trials', 1)
        self.alpha = _number(section['alpha'], 'simulation.alpha')
        self.alphas = None if section['alphas'] is None else _grid(section['alphas'], 'simulation.alphas')
        for alpha in [self.alpha] + (self.alphas or []):
            if not 0 < alpha < 1:
                raise ConfigurationError('simulation.alpha', 'must lie in (0, 1)', alpha)
        if section['bracket'] is None:
            self.simulation_bracket = None
        else:
            bracket = _grid(section['bracket'], 'simulation.bracket')
            if len(bracket) != 2 or not 0 <= bracket[0] < bracket[1]:
                raise ConfigurationError('simulation.bracket', 'expected [low, high] with 0 <= low < high', bracket)
            self.simulation_bracket = (self._angle(bracket[0]), self._angle(bracket[1]))
        self.stream_id = _integer(section['stream_id'], 'simulation.stream_id')

    def with_overrides(self, seed: Optional[int]=None, directory: Optional[str]=None) -> 'RunConfig':
        """Copy with command line overrides applied."""
        data = self.as_dict()
        if seed is not None:
            data['seed'] = seed
        if directory is not None:
            data['output']['directory'] = directory
        return RunConfig(data)

    def as_dict(self) -> Dict[str, Any]:
        """Fully defaulted configuration as given (angles in the configured units)."""
        return {'array': copy.deepcopy(self._array),
                'scene': copy.deepcopy(self._scene),
                'receivers': copy.deepcopy(self._receiver_entries),
                'sweep': copy.deepcopy(self._sweep),
                'quadrature': copy.deepcopy(self._quadrature_section),
                'modes': copy.deepcopy(self._modes),
                'simulation': copy.deepcopy(self._simulation),
                'seed': self.seed,
                'output': copy.deepcopy(self._output)}

    @property
    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON dump of the defaulted configuration. The output directory is excluded
        so moving results does not change their identity."""
        data = self.as_dict()
        del data['output']
        return hashlib.sha256(dumps(data).encode('utf-8')).hexdigest()

    @property
    def short_hash(self) -> str:
        return self.config_hash[:16]

    def metadata(self) -> Dict[str, Any]:
        metadata = {'config_hash': self.config_hash, 'seed': self.seed,
                    'units': 'physical' if self.conversion is not None else 'sigma'}
        if self.conversion is not None:
            metadata['unit_conversion'] = self.conversion.as_dict()
        return metadata


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding='utf-8') as file:
            data = json.load(file)
    except OSError as error:
        raise ConfigurationError(path, 'cannot read configuration file ({})'.format(error.strerror), path) from error
    except json.JSONDecodeError as error:
        raise ConfigurationError(path, 'invalid JSON: {}'.format(error.msg), error.lineno) from error
    return RunConfig(data)


class ConfigurationError(ValueError):
    """Invalid run configuration. path locates the offending entry like "sweep.theta[3]"."""

    def __init__(self, path: str, reason: str, value: Any) -> None:
        super().__init__()
        self.path = path
        self.reason = reason
        self.value = value

    def __str__(self) -> str:
        return "Invalid configuration at <{}>: {} (got {!r})".format(self.path or '.', self.reason, self.value)
