import unittest

import numpy

from quaperture.numerics.random import RngStream


class RngStreamTests(unittest.TestCase):
    def test_reproducible(self) -> None:
        first = RngStream(1234, 2).uniform(size=5)
        second = RngStream(1234, 2).uniform(size=5)
        numpy.testing.assert_array_equal(first, second)

    def test_streams_differ(self) -> None:
        base = RngStream(1234).uniform(size=5)
        self.assertFalse(numpy.array_equal(base, RngStream(1234, 1).uniform(size=5)))
        self.assertFalse(numpy.array_equal(base, RngStream(1235).uniform(size=5)))

    def test_substream_independent_of_parent_draws(self) -> None:
        parent = RngStream(7)
        untouched = parent.substream(3).integers(0, 1000, size=10)
        parent.uniform(size=100)
        numpy.testing.assert_array_equal(parent.substream(3).integers(0, 1000, size=10), untouched)
        self.assertFalse(numpy.array_equal(parent.substream(4).integers(0, 1000, size=10), untouched))

    def test_spawn_key(self) -> None:
        nested = RngStream(7, spawn_key=(0, 5)).uniform(size=3)
        numpy.testing.assert_array_equal(RngStream(7).substream(0).substream(5).uniform(size=3), nested)

    def test_multinomial(self) -> None:
        counts = RngStream(0).multinomial(1000, numpy.array([0.2, 0.3, 0.5]))
        self.assertEqual(counts.sum(), 1000)
        self.assertEqual(counts.shape, (3,))

    def test_validation(self) -> None:
        with self.assertRaises(ValueError):
            RngStream(-1)
        with self.assertRaises(ValueError):
            RngStream(2 ** 64)
        with self.assertRaises(ValueError):
            RngStream(0, -1)
        with self.assertRaises(ValueError):
            RngStream(0).substream(-2)

    def test_properties(self) -> None:
        stream = RngStream(5, 3)
        self.assertEqual((stream.seed, stream.stream_id), (5, 3))
        self.assertIsInstance(stream.generator, numpy.random.Generator)
        self.assertEqual(repr(stream.substream(1)), 'RngStream(seed=5, stream_id=3, spawn_key=(1,))')
