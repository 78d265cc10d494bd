import math
import unittest

from quaperture.apertures import two_aperture, single_aperture, linear_array, make_array, SymmetricArrayRequired
from quaperture.quantum.qfi import QfiResult, qfi_numeric, qfi_two_point_analytic, two_point_sld_workspace
from quaperture.scenes import TwoPointScene, TwoPointParametrization, ExpressionParametrization


class QfiResultTests(unittest.TestCase):
    def test_split(self) -> None:
        result = QfiResult(4., 1., 3., n_photons=2.)
        self.assertTrue(result.has_split)
        self.assertEqual(result.single_aperture_fraction, 0.25)
        self.assertEqual(result.per_photon, 2.)

    def test_without_split(self) -> None:
        result = QfiResult(4.)
        self.assertFalse(result.has_split)
        self.assertIsNone(result.single_aperture_fraction)

    def test_rounding_and_negative(self) -> None:
        self.assertEqual(QfiResult(-1e-14).total, 0.)
        with self.assertRaises(ValueError):
            QfiResult(-1e-3)


class AnalyticQfiTests(unittest.TestCase):
    def test_single_aperture(self) -> None:
        result = qfi_two_point_analytic(single_aperture())
        self.assertAlmostEqual(result.total, 4 * math.pi ** 2 / 3, places=12)
        self.assertAlmostEqual(result.total, 13.1595, places=4)
        self.assertEqual(result.k_lb, 0.)

    def test_two_apertures(self) -> None:
        for r in (1., 1.5, 2., 3.):
            result = qfi_two_point_analytic(two_aperture(r))
            self.assertAlmostEqual(result.total, 4 * math.pi ** 2 / 3 * (3 * r ** 2 + 1), places=10)
            self.assertAlmostEqual(result.k_lb, 4 * math.pi ** 2 * r ** 2, places=10)
        self.assertAlmostEqual(qfi_two_point_analytic(two_aperture(1.)).total, 52.638, places=3)

    def test_photon_scaling(self) -> None:
        self.assertAlmostEqual(qfi_two_point_analytic(two_aperture(2.), 100).total,
                               100 * qfi_two_point_analytic(two_aperture(2.)).total)

    def test_equals_momentum_variance(self) -> None:
        array = linear_array(4, 1.3)
        self.assertAlmostEqual(qfi_two_point_analytic(array).total, 4 * array.momentum_variance, places=10)

    def test_requires_symmetric(self) -> None:
        with self.assertRaises(SymmetricArrayRequired):
            qfi_two_point_analytic(make_array([-4., 1., 3.], 1.))


class NumericQfiTests(unittest.TestCase):
    def test_against_analytic(self) -> None:
        parametrization = TwoPointParametrization()
        for r in (1., 2., 3.):
            array = two_aperture(r)
            expected = qfi_two_point_analytic(array, 10)
            for theta in (0.1, 0.5):
                result = qfi_numeric(array, TwoPointScene(theta, 10), parametrization, 40)
                self.assertAlmostEqual(result.total / expected.total, 1., delta=1e-3, msg=(r, theta))
                self.assertEqual(result.k_lb, expected.k_lb)
                self.assertLess(result.trace_deficit, 1e-4)

    def test_linear_array_against_analytic(self) -> None:
        array = linear_array(3, 2.)
        expected = qfi_two_point_analytic(array).total
        for theta in (0.01, 0.1, 0.5):
            result = qfi_numeric(array, TwoPointScene(theta), TwoPointParametrization())
            self.assertAlmostEqual(result.total / expected, 1., delta=1e-3)

    def test_jacobi_converges_on_nearly_diagonal_problems(self) -> None:
        for array, theta in ((single_aperture(), 0.01), (two_aperture(2.), 0.3), (linear_array(3, 2.), 0.01)):
            scene = TwoPointScene(theta)
            jacobi = qfi_numeric(array, scene, TwoPointParametrization())
            lapack = qfi_numeric(array, scene, TwoPointParametrization(), method='lapack')
            self.assertAlmostEqual(jacobi.total / lapack.total, 1., places=7)

    def test_lapack_agrees(self) -> None:
        array = two_aperture(2.)
        scene = TwoPointScene(0.2)
        jacobi = qfi_numeric(array, scene, TwoPointParametrization(), 20)
        lapack = qfi_numeric(array, scene, TwoPointParametrization(), 20, method='lapack')
        self.assertAlmostEqual(jacobi.total, lapack.total, places=8)

    def test_asymmetric_bounded_by_pure_state_limit(self) -> None:
        array = make_array([-4., 1., 3.], 1.)
        result = qfi_numeric(array, TwoPointScene(0.2), TwoPointParametrization(), 30)
        self.assertFalse(result.has_split)
        self.assertGreater(result.total, 0.)
        self.assertLessEqual(result.total, 4 * array.momentum_variance * (1 + 1e-9))

    def test_brightness_parameter(self) -> None:
        array = two_aperture(2.)
        parametrization = ExpressionParametrization(positions=[-0.3, 0.3], brightness=['(1 - b)/2', '(1 + b)/2'],
                                                    parameter='b')
        result = qfi_numeric(array, parametrization.scene(0.), parametrization, 30)
        self.assertAlmostEqual(result.total, 1 - array.autocorr(0.6) ** 2, places=8)
        self.assertFalse(result.has_split)


class TwoPointSldWorkspaceTests(unittest.TestCase):
    def test_entries_reproduce_qfi(self) -> None:
        for r, theta in ((1., 0.05), (2., 0.2), (3., 0.7)):
            workspace = two_point_sld_workspace(two_aperture(r), theta)
            self.assertFalse(workspace.degenerate)
            self.assertAlmostEqual(workspace.qfi(), qfi_two_point_analytic(two_aperture(r)).total, places=8)
            self.assertAlmostEqual(workspace.qfi_from_entries() / workspace.qfi(), 1., places=8)

    def test_overlap(self) -> None:
        array = two_aperture(2.)
        workspace = two_point_sld_workspace(array, 0.3)
        self.assertAlmostEqual(workspace.delta_overlap, array.autocorr(0.6), places=12)
        low, high = workspace.eigenvalues
        self.assertAlmostEqual(low + high, 1.)

    def test_degenerate(self) -> None:
        workspace = two_point_sld_workspace(two_aperture(2.), 0.)
        self.assertTrue(workspace.degenerate)
        self.assertTrue(math.isnan(workspace.sld_entries['L11']))
        self.assertEqual(workspace.c3, 0.)
        with self.assertRaises(ValueError):
            two_point_sld_workspace(two_aperture(2.), -0.1)
