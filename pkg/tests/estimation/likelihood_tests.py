import math
import unittest

import numpy

from quaperture.apertures import two_aperture
from quaperture.estimation.likelihood import log_likelihood, mle_theta, joint_mle_theta, UndefinedEstimate
from quaperture.receivers.coaxial import TrinarySpade
from quaperture.receivers.multiaxial import DirectImaging
from quaperture.scenes import TwoPointScene


class LogLikelihoodTests(unittest.TestCase):
    def setUp(self) -> None:
        self.array = two_aperture(2.)
        self.receiver = TrinarySpade()

    def test_counts(self) -> None:
        counts = numpy.array([5, 3, 2])
        probabilities = self.receiver.distribution(self.array, TwoPointScene(0.2)).probabilities
        self.assertAlmostEqual(log_likelihood(counts, self.receiver, self.array, 0.2),
                               float(numpy.sum(counts * numpy.log(probabilities))))

    def test_unobserved_outcomes_are_ignored(self) -> None:
        probabilities = self.receiver.distribution(self.array, TwoPointScene(0.2)).probabilities
        self.assertAlmostEqual(log_likelihood(numpy.array([4, 0, 0]), self.receiver, self.array, 0.2),
                               4 * math.log(probabilities[0]))

    def test_positions(self) -> None:
        positions = numpy.array([-0.4, 0.1, 0.25])
        dist = DirectImaging().distribution(self.array, TwoPointScene(0.3))
        self.assertAlmostEqual(log_likelihood(positions, DirectImaging(), self.array, 0.3),
                               float(numpy.sum(numpy.log(dist.density(positions)))))

    def test_shape_mismatch(self) -> None:
        with self.assertRaises(ValueError):
            log_likelihood(numpy.array([1, 2]), self.receiver, self.array, 0.2)


class MleTests(unittest.TestCase):
    def setUp(self) -> None:
        self.array = two_aperture(2.)
        self.receiver = TrinarySpade()
        self.expected = 10000 * self.receiver.distribution(self.array, TwoPointScene(0.3)).probabilities

    def test_expected_counts(self) -> None:
        self.assertAlmostEqual(mle_theta(self.expected, self.receiver, self.array, (0.01, 0.9)), 0.3, places=5)

    def test_default_bracket(self) -> None:
        self.assertAlmostEqual(mle_theta(self.expected, self.receiver, self.array), 0.3, places=5)

    def test_joint_records(self) -> None:
        first, second = 0.25 * self.expected, 0.75 * self.expected
        joint = joint_mle_theta([(first, self.receiver), (second, self.receiver)], self.array, (0.01, 0.9))
        self.assertAlmostEqual(joint, 0.3, places=5)

    def test_flat_likelihood(self) -> None:
        with self.assertRaises(UndefinedEstimate) as context:
            mle_theta(numpy.zeros(3), self.receiver, self.array, (0.01, 0.9))
        self.assertIn('does not depend', str(context.exception))

    def test_boundary_maximum(self) -> None:
        with self.assertRaises(UndefinedEstimate) as context:
            mle_theta(numpy.array([100., 0., 0.]), self.receiver, self.array, (0.01, 0.9))
        self.assertIn('boundary', str(context.exception))

    def test_invalid_bracket(self) -> None:
        with self.assertRaises(ValueError):
            mle_theta(self.expected, self.receiver, self.array, (0.5, 0.2))
