import math
import unittest

from quaperture.apertures import two_aperture
from quaperture.units import RAD_TO_MAS, rayleigh_scale_rad, rayleigh_scale_mas, baseline_ratio, \
    physical_conversion, physical_array, single_aperture_fraction, percent_mse_reduction


class RayleighScaleTests(unittest.TestCase):
    def test_large_telescope_h_band(self) -> None:
        self.assertAlmostEqual(rayleigh_scale_mas(8.408, 1.65), 254.3, delta=0.5)
        self.assertAlmostEqual(rayleigh_scale_rad(8.408, 1.65) * RAD_TO_MAS, rayleigh_scale_mas(8.408, 1.65))

    def test_invalid(self) -> None:
        with self.assertRaises(ValueError):
            rayleigh_scale_rad(0., 1.)
        with self.assertRaises(ValueError):
            rayleigh_scale_rad(1., -1.)

    def test_conversion(self) -> None:
        conversion = physical_conversion(8.408, 1.65)
        self.assertAlmostEqual(conversion.mas_to_sigma(conversion.sigma_mas), 1.)
        self.assertAlmostEqual(conversion.sigma_to_mas(0.1), 0.1 * conversion.sigma_mas)
        data = conversion.as_dict()
        self.assertEqual(data['diameter_m'], 8.408)
        self.assertEqual(data['formula'], 'sigma = 2*pi*wavelength/diameter')


class PhysicalArrayTests(unittest.TestCase):
    def test_two_telescopes(self) -> None:
        array = physical_array([-7.2, 7.2], 8.4)
        self.assertAlmostEqual(array.r, baseline_ratio(14.4, 8.4))
        self.assertAlmostEqual(array.sigma, 1.)


class QfiSplitTests(unittest.TestCase):
    def test_single_aperture_fraction(self) -> None:
        self.assertAlmostEqual(single_aperture_fraction(two_aperture(1.71)), 0.1023, delta=5e-4)
        self.assertAlmostEqual(single_aperture_fraction(two_aperture(1.)), 0.25)

    def test_percent_mse_reduction(self) -> None:
        array = two_aperture(2.)
        self.assertAlmostEqual(percent_mse_reduction(array), 100 / 13)
        self.assertLess(percent_mse_reduction(two_aperture(3.)), percent_mse_reduction(array))
        self.assertTrue(math.isfinite(percent_mse_reduction(two_aperture(20.))))
