import math
import unittest

import numpy

from quaperture.apertures import ApertureArray, make_array, single_aperture, two_aperture, linear_array, \
    psf_single, psf_single_derivative, autocorr_single, autocorr_single_derivs, require_symmetric, \
    ApertureGeometryError, SymmetricArrayRequired
from quaperture.numerics.differentiation import central_diff
from quaperture.numerics.quadrature import integrate


class SingleApertureFunctionTests(unittest.TestCase):
    def test_psf_values(self) -> None:
        self.assertEqual(psf_single(0.), 1.)
        self.assertAlmostEqual(psf_single(0.5), math.sin(math.pi / 2) / (math.pi / 2), places=15)
        self.assertAlmostEqual(psf_single(1.), 0., places=15)
        self.assertAlmostEqual(psf_single(2., sigma=4.), 0.5 * math.sin(math.pi / 2) / (math.pi / 2), places=15)

    def test_psf_patch_is_continuous(self) -> None:
        inside, outside = 0.99e-4, 1.01e-4
        self.assertAlmostEqual(psf_single(inside), math.sin(math.pi * inside) / (math.pi * inside), places=14)
        self.assertAlmostEqual(psf_single(outside), math.sin(math.pi * outside) / (math.pi * outside), places=14)

    def test_psf_normalization(self) -> None:
        self.assertAlmostEqual(integrate(lambda x: psf_single(x) ** 2, tail_mean=0.5).value, 1., delta=1e-6)

    def test_psf_derivative(self) -> None:
        for x in (0., 1e-3, 0.04, 0.3, 2.7):
            self.assertAlmostEqual(psf_single_derivative(x), central_diff(psf_single, x), places=8)

    def test_autocorr_derivatives(self) -> None:
        for a in (0., 0.01, 0.2, 1.3):
            value, first, second = autocorr_single_derivs(a)
            self.assertEqual(value, autocorr_single(a))
            self.assertAlmostEqual(first, central_diff(autocorr_single, a), places=8)
            self.assertAlmostEqual(second, central_diff(lambda b: autocorr_single_derivs(b)[1], a), places=7)
        self.assertAlmostEqual(autocorr_single_derivs(0.)[2], -math.pi ** 2 / 3, places=12)


class ApertureArrayTests(unittest.TestCase):
    def test_two_aperture_geometry(self) -> None:
        array = two_aperture(2.)
        self.assertEqual(array.n, 2)
        self.assertAlmostEqual(array.sigma, 1.)
        self.assertAlmostEqual(array.delta, 2 * math.pi)
        self.assertAlmostEqual(array.baseline, 4 * math.pi)
        self.assertAlmostEqual(array.r, 2.)
        numpy.testing.assert_allclose(array.r_mu, [-1., 1.])
        self.assertEqual(array.mirror_pairs, (((0, 1),), None))
        self.assertTrue(array.is_symmetric)

    def test_touching_apertures(self) -> None:
        self.assertAlmostEqual(two_aperture(1.).r, 1.)

    def test_linear_array(self) -> None:
        array = linear_array(3, 2.)
        numpy.testing.assert_allclose(array.r_mu, [-2., 0., 2.])
        self.assertEqual(array.mirror_pairs, (((0, 2),), 1))
        with self.assertRaises(ApertureGeometryError):
            array.baseline

    def test_single_aperture(self) -> None:
        array = single_aperture()
        self.assertEqual(array.n, 1)
        self.assertEqual(array.mirror_pairs, ((), 0))
        self.assertAlmostEqual(array.momentum_variance, math.pi ** 2 / 3)

    def test_asymmetric(self) -> None:
        array = make_array([-4., 1., 3.], 1.)
        self.assertIsNone(array.mirror_pairs)
        self.assertFalse(array.is_symmetric)
        with self.assertRaises(SymmetricArrayRequired) as context:
            require_symmetric(array, 'test operation')
        self.assertIn('test operation', str(context.exception))
        require_symmetric(two_aperture(3.), 'test operation')

    def test_invalid_geometry(self) -> None:
        with self.assertRaises(ApertureGeometryError):
            two_aperture(0.5)
        with self.assertRaises(ApertureGeometryError):
            make_array([0., 1.], 0.5)
        with self.assertRaises(ApertureGeometryError):
            make_array([], 1.)
        with self.assertRaises(ApertureGeometryError):
            make_array([0.], -1.)
        with self.assertRaises(ApertureGeometryError):
            make_array([-1., math.inf], 1.)
        with self.assertRaises(ApertureGeometryError) as context:
            make_array([-1., 1.5], 1.)
        self.assertIn('mean aperture position', str(context.exception))

    def test_momentum_variance(self) -> None:
        for r in (1., 1.71, 3.):
            array = two_aperture(r)
            self.assertAlmostEqual(array.momentum_variance, math.pi ** 2 * (r ** 2 + 1 / 3))
            self.assertAlmostEqual(array.autocorr_derivs(0.)[2], -array.momentum_variance, places=10)

    def test_autocorr_against_aperture_plane(self) -> None:
        for array in (two_aperture(2.5), linear_array(4, 1.5), make_array([-4., 1., 3.], 1.)):
            for a in (0., 0.05, 0.4, 1.7):
                expected = array.aperture_integral(lambda k: numpy.exp(-1j * k * a))
                self.assertAlmostEqual(complex(array.autocorr(a)), complex(expected), places=12)

    def test_autocorr_symmetric_is_real(self) -> None:
        value, first, second = two_aperture(2.).autocorr_derivs(numpy.linspace(0, 1, 5))
        for values in (value, first, second):
            self.assertFalse(numpy.iscomplexobj(values))
        self.assertEqual(two_aperture(2.).autocorr(0.), 1.)

    def test_autocorr_derivatives(self) -> None:
        array = make_array([-4., 1., 3.], 1.)
        for a in (0.1, 0.9):
            _, first, second = array.autocorr_derivs(a)
            self.assertAlmostEqual(complex(first), complex(central_diff(array.autocorr, a)), places=7)
            self.assertAlmostEqual(complex(second),
                                   complex(central_diff(lambda b: array.autocorr_derivs(b)[1], a)), places=6)

    def test_intensity(self) -> None:
        array = linear_array(3, 1.7)
        x = numpy.linspace(-3, 3, 31)
        numpy.testing.assert_allclose(array.intensity(x), numpy.abs(array.psf(x)) ** 2, atol=1e-14)
        for point in (0.13, 1.9):
            self.assertAlmostEqual(array.intensity_derivative(point), central_diff(array.intensity, point), places=7)
            self.assertAlmostEqual(complex(array.psf_derivative(point)), complex(central_diff(array.psf, point)),
                                   places=7)

    def test_intensity_normalization(self) -> None:
        array = two_aperture(2.)
        self.assertAlmostEqual(integrate(array.intensity, tail_mean=0.5).value, 1., delta=1e-5)

    def test_aperture_intensity(self) -> None:
        array = two_aperture(2.)
        values = array.aperture_intensity([-2 * math.pi, 0., 2 * math.pi, 4 * math.pi])
        numpy.testing.assert_allclose(values, [1 / (4 * math.pi), 0., 1 / (4 * math.pi), 0.])
        self.assertAlmostEqual(array.aperture_integral(lambda k: numpy.ones_like(k)), 1.)

    def test_equality(self) -> None:
        self.assertEqual(two_aperture(2.), two_aperture(2.))
        self.assertEqual(hash(two_aperture(2.)), hash(two_aperture(2.)))
        self.assertNotEqual(two_aperture(2.), two_aperture(3.))
        self.assertNotEqual(two_aperture(2.), ApertureArray([-2 * math.pi, 2 * math.pi], 2 * math.pi, 1e-3))

    def test_repr(self) -> None:
        self.assertEqual(repr(make_array([-1., 1.], 1.)), 'ApertureArray(positions=[-1.0, 1.0], delta=1.0)')

    def test_positions_read_only(self) -> None:
        with self.assertRaises(ValueError):
            two_aperture(2.).positions[0] = 0.
