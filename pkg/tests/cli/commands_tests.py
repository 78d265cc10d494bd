import math
import os
import unittest

from quaperture.apertures import two_aperture
from quaperture.cli.commands import cmd_qfi, cmd_cfi_sweep, cmd_theta_max, cmd_simulate, cmd_figures, is_multiaxial,\
    QuantumOrderingViolation, SweepResult, CFI_COLUMNS, ORDERING_TOLERANCE
from quaperture.cli.config import RunConfig
from quaperture.receivers.coaxial import Groupwise, LightPipe, TrinarySpade
from quaperture.receivers.multiaxial import BinSpade0, DirectImaging, FullSpade, Sliver
from quaperture.units import percent_mse_reduction


SLOW_TESTS = bool(os.environ.get('QUAPERTURE_SLOW_TESTS'))


class SweepResultTests(unittest.TestCase):
    def test_select(self) -> None:
        result = SweepResult('test', ('a', 'b'), [(1, 'x'), (2, 'y'), (1, 'z')], {})
        self.assertEqual(result.column('b'), ['x', 'y', 'z'])
        self.assertEqual(result.select(a=1).rows, [(1, 'x'), (1, 'z')])
        self.assertEqual(result.select(a=1, b='z').rows, [(1, 'z')])


class QfiCommandTests(unittest.TestCase):
    def test_two_point(self) -> None:
        result = cmd_qfi(RunConfig({'sweep': {'r': [3, 1, 2]}}))
        self.assertEqual(result.schema, 'qfi')
        self.assertEqual(result.column('r'), [1., 2., 3.])
        for r, total, k_1ap, k_lb, fraction in result.rows:
            self.assertAlmostEqual(k_1ap, 4 * math.pi ** 2 / 3)
            self.assertAlmostEqual(k_lb, 4 * math.pi ** 2 * r ** 2)
            self.assertAlmostEqual(total, k_1ap + k_lb)
            self.assertAlmostEqual(fraction, k_1ap / total)
        self.assertEqual(result.metadata['seed'], 0)

    def test_photon_number(self) -> None:
        single = cmd_qfi(RunConfig({'sweep': {'r': [2]}}))
        many = cmd_qfi(RunConfig({'sweep': {'r': [2]}, 'scene': {'n_photons': 100}}))
        self.assertAlmostEqual(many.rows[0][1], 100 * single.rows[0][1])

    def test_numeric(self) -> None:
        config = RunConfig({'scene': {'parametrization': {'#type': 'expression', 'positions': ['-0.3', '0.3'],
                                                          'brightness': ['theta', '1 - theta']}},
                            'sweep': {'theta': [0.3, 0.5], 'r': [2]},
                            'modes': {'j_max': 10, 'eig_method': 'lapack'}})
        result = cmd_qfi(config)
        self.assertEqual(result.schema, 'qfi-theta')
        self.assertEqual(result.column('theta'), [0.3, 0.5])
        self.assertTrue(all(math.isnan(value) for value in result.column('K_1ap')))
        self.assertTrue(all(value > 0 for value in result.column('K_total')))


class CfiCommandTests(unittest.TestCase):
    def setUp(self) -> None:
        self.config = RunConfig({'receivers': ['trinary', 'lightpipe', 'sliver'],
                                 'sweep': {'theta': [0.3, 0.1], 'r': [2, 1]}})

    def test_rows(self) -> None:
        result = cmd_cfi_sweep(self.config)
        self.assertEqual(result.schema, 'cfi')
        self.assertEqual(result.columns, CFI_COLUMNS)
        self.assertEqual(len(result.rows), 12)
        self.assertEqual([row[:3] for row in result.rows], sorted(row[:3] for row in result.rows))
        self.assertEqual(result.rows[0][:3], ('lightpipe', 1., 0.1))
        for receiver, r, theta, cfi, qfi, ratio, k_1ap, k_lb in result.rows:
            self.assertLessEqual(ratio, 1 + 1e-6)
            self.assertAlmostEqual(ratio, cfi / qfi)
            if receiver == 'lightpipe':
                self.assertAlmostEqual(cfi / k_lb, 1., places=9)

    def test_explicit_receivers(self) -> None:
        result = cmd_cfi_sweep(self.config, receivers=[Groupwise('pairwise', 20)])
        self.assertEqual(set(result.column('receiver')), {'groupwise'})
        for ratio in result.column('CFI_over_QFI'):
            self.assertAlmostEqual(ratio, 1., places=6)

    def test_default_grid_respects_qfi(self) -> None:
        defaults = RunConfig()
        thinned = RunConfig({'sweep': {'theta': defaults.theta_grid[::11]}})
        self.assertEqual([r for r, _ in thinned.arrays()], [r for r, _ in defaults.arrays()])
        self.assertEqual(thinned.receivers, defaults.receivers)
        result = cmd_cfi_sweep(thinned)
        self.assertEqual(len(result.rows), len(defaults.receivers) * len(defaults.arrays()) * 10)
        for ratio in result.column('CFI_over_QFI'):
            self.assertLessEqual(ratio, 1 + ORDERING_TOLERANCE)

    @unittest.skipUnless(SLOW_TESTS, 'set QUAPERTURE_SLOW_TESTS to run the full default sweep')
    def test_full_default_grid_respects_qfi(self) -> None:
        config = RunConfig()
        result = cmd_cfi_sweep(config)
        self.assertEqual(len(result.rows), len(config.receivers) * len(config.arrays()) * len(config.theta_grid))
        for ratio in result.column('CFI_over_QFI'):
            self.assertLessEqual(ratio, 1 + ORDERING_TOLERANCE)


class ThetaMaxCommandTests(unittest.TestCase):
    def test_status(self) -> None:
        config = RunConfig({'receivers': ['trinary', 'lightpipe'],
                            'sweep': {'r': [1.71], 'theta_max_bracket': [1e-3, 0.5], 'theta_max_grid': 50}})
        result = cmd_theta_max(config)
        self.assertEqual(result.columns, ('receiver', 'r', 'theta_max', 'status'))
        rows = {row[0]: row for row in result.rows}
        self.assertEqual(rows['lightpipe'][3], 'degenerate')
        self.assertTrue(math.isnan(rows['lightpipe'][2]))
        self.assertEqual(rows['trinary'][3], 'root')
        self.assertAlmostEqual(rows['trinary'][2], 0.19, delta=0.01)

    def test_no_root(self) -> None:
        config = RunConfig({'sweep': {'r': [1.71], 'theta_max_bracket': [1e-3, 1e-2], 'theta_max_grid': 5}})
        result = cmd_theta_max(config, receivers=[BinSpade0()])
        self.assertEqual(result.rows[0][0], 'binspade0')
        self.assertEqual(result.rows[0][3], 'no-root')


class SimulateCommandTests(unittest.TestCase):
    def test_crb(self) -> None:
        config = RunConfig({'simulation': {'receiver': 'trinary', 'theta_true': 0.3, 'n_photons': 1000,
                                           'n_trials': 100, 'bracket': [0.05, 0.9]},
                            'seed': 4})
        simulation = cmd_simulate(config)
        self.assertEqual(simulation.estimates.schema, 'mc-crb')
        record = simulation.records[0][1]
        self.assertEqual(len(simulation.estimates.rows), record.theta_hat.size)
        self.assertEqual(simulation.summary['mode'], 'crb')
        self.assertEqual(simulation.summary['receiver'], 'trinary')
        self.assertEqual(simulation.summary['seed'], 4)
        self.assertEqual(simulation.summary['records'][0]['successful_trials'] +
                         simulation.summary['records'][0]['failed_trials'], 100)

    def test_reproducible(self) -> None:
        config = RunConfig({'simulation': {'receiver': 'trinary', 'theta_true': 0.3, 'n_photons': 1000,
                                           'n_trials': 100, 'bracket': [0.05, 0.9]}})
        self.assertEqual(cmd_simulate(config).estimates.rows, cmd_simulate(config).estimates.rows)

    def test_two_stage(self) -> None:
        config = RunConfig({'simulation': {'mode': 'two_stage', 'theta_true': 0.3, 'n_photons': 1000,
                                           'n_trials': 10, 'alphas': [0.5], 'bracket': [0.05, 0.9]}})
        simulation = cmd_simulate(config)
        self.assertEqual(simulation.estimates.schema, 'mc-two-stage')
        self.assertEqual(simulation.estimates.columns, ('alpha', 'estimate', 'theta_hat_stage_one', 'theta_hat'))
        self.assertEqual(set(simulation.estimates.column('alpha')), {0.5})
        self.assertEqual(simulation.summary['receiver'], 'two_stage')
        self.assertEqual(simulation.summary['records'][0]['alpha'], 0.5)


class FiguresCommandTests(unittest.TestCase):
    def test_figures(self) -> None:
        config = RunConfig({'receivers': ['sliver', 'trinary', 'lightpipe'],
                            'sweep': {'theta': [0.1, 0.3], 'r': [1.71], 'theta_max_bracket': [1e-3, 0.5],
                                      'theta_max_grid': 30}})
        figures = {figure.name: figure for figure in cmd_figures(config)}
        self.assertEqual(set(figures), {'qfi_split', 'cfi_multiaxial_r1.71', 'cfi_coaxial_r1.71', 'mse_reduction',
                                        'theta_max_over_r'})
        self.assertEqual(figures['cfi_multiaxial_r1.71'].columns, ('theta', 'sliver'))
        self.assertEqual(figures['cfi_coaxial_r1.71'].columns, ('theta', 'lightpipe', 'trinary'))
        self.assertEqual([row[0] for row in figures['cfi_coaxial_r1.71'].rows], [0.1, 0.3])
        self.assertEqual(figures['mse_reduction'].rows, [(1.71, percent_mse_reduction(two_aperture(1.71)))])
        qfi_row = figures['qfi_split'].rows[0]
        self.assertAlmostEqual(figures['mse_reduction'].rows[0][1], 100 * qfi_row[2] / qfi_row[1])
        self.assertEqual(figures['theta_max_over_r'].columns, ('r', 'lightpipe', 'trinary'))

    def test_needs_two_point_problem(self) -> None:
        config = RunConfig({'scene': {'parametrization': {'#type': 'expression', 'positions': ['-0.3', '0.3'],
                                                          'brightness': ['theta', '1 - theta']}},
                            'sweep': {'theta': [0.5], 'r': [2]},
                            'modes': {'j_max': 10, 'eig_method': 'lapack'}})
        with self.assertRaises(ValueError):
            cmd_figures(config)


class HelperTests(unittest.TestCase):
    def test_is_multiaxial(self) -> None:
        for receiver in (DirectImaging(), FullSpade(), BinSpade0(), Sliver()):
            self.assertTrue(is_multiaxial(receiver))
        for receiver in (Groupwise(), TrinarySpade(), LightPipe()):
            self.assertFalse(is_multiaxial(receiver))

    def test_ordering_violation_message(self) -> None:
        violation = QuantumOrderingViolation(Sliver(), 2., 0.1, 170.5, 170.)
        self.assertIn('exceeds the QFI', str(violation))
        self.assertIsInstance(violation, ArithmeticError)
