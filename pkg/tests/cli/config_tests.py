import json
import math
import os
import tempfile
import unittest

from quaperture.cli.config import RunConfig, load_config, ConfigurationError, DEFAULTS
from quaperture.receivers.coaxial import Groupwise, TrinarySpade
from quaperture.receivers.multiaxial import DirectImaging
from quaperture.scenes import ExpressionParametrization, TwoPointParametrization


class RunConfigTests(unittest.TestCase):
    def test_defaults(self) -> None:
        config = RunConfig()
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.array.n, 2)
        self.assertAlmostEqual(config.array.r, 2.)
        self.assertEqual(len(config.theta_grid), 100)
        self.assertEqual([receiver.name for receiver in config.receivers], DEFAULTS['receivers'])
        self.assertEqual(config.parametrization, TwoPointParametrization())
        self.assertEqual(config.simulation_receiver, TrinarySpade())
        self.assertIsNone(config.conversion)
        self.assertEqual(config.output_directory, 'quaperture-out')

    def test_unknown_keys(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            RunConfig({'arrays': {}})
        self.assertEqual(context.exception.path, '')
        with self.assertRaises(ConfigurationError) as context:
            RunConfig({'sweep': {'thetas': [0.1]}})
        self.assertEqual(context.exception.path, 'sweep')
        self.assertIn('thetas', str(context.exception))

    def test_expressions(self) -> None:
        config = RunConfig({'sweep': {'theta': ['pi/10', 0.5]}, 'array': {'r': '3/2'}})
        self.assertAlmostEqual(config.theta_grid[0], math.pi / 10)
        self.assertEqual(config.theta_grid[1], 0.5)
        self.assertAlmostEqual(config.array.r, 1.5)

    def test_invalid_numbers(self) -> None:
        for data in ({'seed': True}, {'seed': -1}, {'seed': 1.5}, {'sweep': {'theta': ['theta']}},
                     {'sweep': {'theta': [0., 0.1]}}, {'scene': {'n_photons': 0}},
                     {'modes': {'j_max': -1}}, {'quadrature': {'rel_tol': 0}}):
            with self.assertRaises(ConfigurationError, msg=repr(data)):
                RunConfig(data)

    def test_grids(self) -> None:
        config = RunConfig({'sweep': {'theta': {'start': 0.1, 'stop': 0.3, 'step': 0.1},
                                      'r': {'start': 1, 'stop': 3, 'num': 5}}})
        self.assertEqual(len(config.theta_grid), 3)
        for value, expected in zip(config.theta_grid, (0.1, 0.2, 0.3)):
            self.assertAlmostEqual(value, expected)
        self.assertEqual(config.r_grid, [1., 1.5, 2., 2.5, 3.])
        with self.assertRaises(ConfigurationError):
            RunConfig({'sweep': {'theta': {'start': 0.1, 'stop': 0.3}}})
        with self.assertRaises(ConfigurationError):
            RunConfig({'sweep': {'theta': []}})

    def test_receivers(self) -> None:
        config = RunConfig({'receivers': ['direct', {'#type': 'groupwise', 'j_max': 3, 'with_bucket': False}]})
        self.assertEqual(config.receivers, [DirectImaging(), Groupwise('pairwise', 3, False)])
        for receivers in ([], ['no_such_receiver'], ['two_point'], [{'j_max': 3}], 'trinary'):
            with self.assertRaises(ConfigurationError, msg=repr(receivers)):
                RunConfig({'receivers': receivers})

    def test_parametrization(self) -> None:
        config = RunConfig({'scene': {'parametrization': {'#type': 'expression', 'positions': ['-0.3', '0.3'],
                                                         'brightness': ['theta', '1 - theta']}}})
        self.assertIsInstance(config.parametrization, ExpressionParametrization)
        self.assertTrue(config.parametrization.brightness_only)
        with self.assertRaises(ConfigurationError):
            RunConfig({'scene': {'parametrization': 'trinary'}})

    def test_arrays(self) -> None:
        config = RunConfig({'sweep': {'r': [1, 2]}})
        self.assertEqual([r for r, _ in config.arrays()], [1., 2.])
        self.assertEqual(config.two_aperture_ratios(), [1., 2.])

        config = RunConfig({'array': {'n': 3}, 'sweep': {'r': [1, 2]}})
        self.assertTrue(all(array.n == 3 for _, array in config.arrays()))
        with self.assertRaises(ConfigurationError):
            config.two_aperture_ratios()

        config = RunConfig({'array': {'positions': [-1, 0.5, 2]}})
        self.assertTrue(config.explicit_geometry)
        arrays = config.arrays()
        self.assertEqual(len(arrays), 1)
        self.assertTrue(math.isnan(arrays[0][0]))
        self.assertFalse(arrays[0][1].is_symmetric)

    def test_physical_units(self) -> None:
        config = RunConfig({'array': {'units': 'physical', 'diameter_m': 1, 'wavelength_um': 1, 'baseline_m': 10},
                            'sweep': {'theta': [10, 20]}})
        self.assertTrue(config.explicit_geometry)
        self.assertAlmostEqual(config.array.r, 10.)
        self.assertEqual(config.theta_grid, [config.conversion.mas_to_sigma(10.), config.conversion.mas_to_sigma(20.)])
        metadata = config.metadata()
        self.assertEqual(metadata['units'], 'physical')
        self.assertEqual(metadata['unit_conversion']['diameter_m'], 1.)

        for array in ({'units': 'physical', 'diameter_m': 1, 'baseline_m': 10},
                      {'units': 'physical', 'diameter_m': 1, 'wavelength_um': 1},
                      {'units': 'parsec'}):
            with self.assertRaises(ConfigurationError, msg=repr(array)):
                RunConfig({'array': array})

    def test_simulation(self) -> None:
        config = RunConfig({'simulation': {'mode': 'two_stage', 'alphas': [0.3, 0.6], 'bracket': [0.01, 1]}})
        self.assertEqual(config.simulation_mode, 'two_stage')
        self.assertEqual(config.alphas, [0.3, 0.6])
        self.assertEqual(config.simulation_bracket, (0.01, 1.))
        for simulation in ({'mode': 'adaptive'}, {'alpha': 1}, {'alphas': [0.5, 0]}, {'bracket': [0.5, 0.1]},
                           {'n_photons': 0}, {'receiver': 'two_point'}):
            with self.assertRaises(ConfigurationError, msg=repr(simulation)):
                RunConfig({'simulation': simulation})

    def test_theta_max_bracket(self) -> None:
        self.assertEqual(RunConfig().theta_max_bracket, (1e-3, 1.))
        with self.assertRaises(ConfigurationError):
            RunConfig({'sweep': {'theta_max_bracket': [0.5, 0.1]}})

    def test_hash(self) -> None:
        first = RunConfig({'output': {'directory': 'a'}})
        self.assertEqual(first.config_hash, RunConfig({'output': {'directory': 'b'}}).config_hash)
        self.assertNotEqual(first.config_hash, RunConfig({'seed': 1}).config_hash)
        self.assertEqual(len(first.config_hash), 64)
        self.assertEqual(first.short_hash, first.config_hash[:16])
        self.assertEqual(first.metadata(), {'config_hash': first.config_hash, 'seed': 0, 'units': 'sigma'})

    def test_overrides(self) -> None:
        config = RunConfig({'seed': 3}).with_overrides(seed=9, directory='elsewhere')
        self.assertEqual(config.seed, 9)
        self.assertEqual(config.output_directory, 'elsewhere')
        self.assertEqual(RunConfig({'seed': 3}).with_overrides().config_hash, RunConfig({'seed': 3}).config_hash)

    def test_error_message(self) -> None:
        error = ConfigurationError('sweep.theta[3]', 'expected a number', None)
        self.assertEqual(str(error), 'Invalid configuration at <sweep.theta[3]>: expected a number (got None)')


class LoadConfigTests(unittest.TestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.directory.cleanup()

    def _write(self, text: str) -> str:
        path = os.path.join(self.directory.name, 'run.json')
        with open(path, 'w', encoding='utf-8') as file:
            file.write(text)
        return path

    def test_load(self) -> None:
        path = self._write(json.dumps({'seed': 12, 'receivers': ['sliver']}))
        config = load_config(path)
        self.assertEqual(config.seed, 12)
        self.assertEqual(len(config.receivers), 1)

    def test_missing_file(self) -> None:
        with self.assertRaises(ConfigurationError):
            load_config(os.path.join(self.directory.name, 'missing.json'))

    def test_invalid_json(self) -> None:
        with self.assertRaises(ConfigurationError) as context:
            load_config(self._write('{"seed": 1,'))
        self.assertIn('invalid JSON', str(context.exception))

    def test_not_an_object(self) -> None:
        with self.assertRaises(ConfigurationError):
            load_config(self._write('[1, 2]'))
