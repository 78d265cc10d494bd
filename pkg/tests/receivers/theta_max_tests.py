import math
import unittest

from quaperture.apertures import two_aperture
from quaperture.quantum.qfi import qfi_two_point_analytic
from quaperture.receivers.closed_forms import trinary_spade_cfi
from quaperture.receivers.coaxial import TrinarySpade, LightPipe
from quaperture.receivers.multiaxial import BinSpade0
from quaperture.receivers.theta_max import ThetaMax, theta_max_vs_longbaseline, NoSignChange
from quaperture.scenes import TwoPointScene


class ThetaMaxTests(unittest.TestCase):
    def test_trinary_spade(self) -> None:
        """The closed form crosses K_lb at theta = 0.1883 sigma for r = 1.71, just below the quoted bound of
        0.195 sigma."""
        result = theta_max_vs_longbaseline(TrinarySpade(), 1.71, (1e-3, 0.5), grid=50)
        self.assertIsInstance(result, ThetaMax)
        self.assertFalse(result.degenerate)
        self.assertEqual(result.r, 1.71)
        self.assertAlmostEqual(result.theta_max, 0.1883, delta=0.002)

        array = two_aperture(1.71)
        k_lb = qfi_two_point_analytic(array).k_lb
        self.assertAlmostEqual(trinary_spade_cfi(array, TwoPointScene(result.theta_max)).value, k_lb, delta=1e-3)
        self.assertGreater(trinary_spade_cfi(array, TwoPointScene(result.theta_max - 0.01)).value, k_lb)
        self.assertLess(trinary_spade_cfi(array, TwoPointScene(result.theta_max + 0.01)).value, k_lb)

    def test_lightpipe_is_degenerate(self) -> None:
        result = theta_max_vs_longbaseline(LightPipe(), 1.71, grid=20)
        self.assertTrue(result.degenerate)
        self.assertTrue(math.isnan(result.theta_max))
        self.assertEqual(result.receiver, LightPipe())

    def test_no_sign_change(self) -> None:
        with self.assertRaises(NoSignChange) as context:
            theta_max_vs_longbaseline(BinSpade0(), 1.71, (1e-3, 1e-2), grid=5)
        self.assertTrue(context.exception.above)
        self.assertEqual(context.exception.bracket, (1e-3, 1e-2))
        self.assertIn('above', str(context.exception))

    def test_invalid_bracket(self) -> None:
        for bracket in ((0., 0.5), (0.5, 0.1), (-0.1, 0.2)):
            with self.assertRaises(ValueError):
                theta_max_vs_longbaseline(TrinarySpade(), 1.71, bracket)
