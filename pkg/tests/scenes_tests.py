import unittest

import numpy

from quaperture.scenes import Scene, TwoPointScene, TwoPointParametrization, ExpressionParametrization, SceneError
from quaperture.serialization import dumps, loads


class SceneTests(unittest.TestCase):
    def test_properties(self) -> None:
        scene = Scene([-1., 0.5], [0.25, 0.75], n_photons=10)
        self.assertEqual(scene.source_count, 2)
        self.assertEqual(scene.sources, [(-1., 0.25), (0.5, 0.75)])
        self.assertEqual(scene.n_photons, 10.)
        self.assertIsNone(scene.theta)
        self.assertEqual(scene.with_photons(5).n_photons, 5.)

    def test_validation(self) -> None:
        with self.assertRaises(SceneError):
            Scene([], [])
        with self.assertRaises(SceneError):
            Scene([0., 1.], [1.])
        with self.assertRaises(SceneError):
            Scene([0., numpy.nan], [.5, .5])
        with self.assertRaises(SceneError):
            Scene([0., 1.], [1., 0.])
        with self.assertRaises(SceneError) as context:
            Scene([0., 1.], [.5, .6])
        self.assertIn('sum to one', str(context.exception))
        with self.assertRaises(SceneError):
            Scene([0.], [1.], n_photons=0)

    def test_equality(self) -> None:
        self.assertEqual(Scene([0.], [1.]), Scene([0.], [1.]))
        self.assertNotEqual(Scene([0.], [1.]), Scene([0.], [1.], n_photons=2))


class TwoPointSceneTests(unittest.TestCase):
    def test_geometry(self) -> None:
        scene = TwoPointScene(0.2, 100)
        numpy.testing.assert_array_equal(scene.positions, [-0.2, 0.2])
        numpy.testing.assert_array_equal(scene.brightness, [.5, .5])
        self.assertEqual(scene.theta, 0.2)
        self.assertIsInstance(scene.with_photons(3), TwoPointScene)
        self.assertEqual(repr(scene), 'TwoPointScene(theta=0.2, n_photons=100.0)')

    def test_coincident_sources(self) -> None:
        self.assertEqual(TwoPointScene(0.).theta, 0.)
        with self.assertRaises(SceneError):
            TwoPointScene(-0.1)


class TwoPointParametrizationTests(unittest.TestCase):
    def test_values(self) -> None:
        parametrization = TwoPointParametrization()
        self.assertTrue(parametrization.is_two_point)
        self.assertEqual(parametrization.source_count, 2)
        numpy.testing.assert_array_equal(parametrization.positions(0.3), [-0.3, 0.3])
        numpy.testing.assert_array_equal(parametrization.position_derivatives(0.3), [-1., 1.])
        numpy.testing.assert_array_equal(parametrization.brightness_derivatives(0.3), [0., 0.])
        self.assertEqual(parametrization.scene(0.3, 7), TwoPointScene(0.3, 7))

    def test_serialization(self) -> None:
        self.assertEqual(loads(dumps(TwoPointParametrization())), TwoPointParametrization())
        self.assertEqual(loads('{"#type": "two_point"}'), TwoPointParametrization())


class ExpressionParametrizationTests(unittest.TestCase):
    def test_positions_and_derivatives(self) -> None:
        parametrization = ExpressionParametrization(positions=['-theta', '2*theta**2'], brightness=['2/3', '1/3'])
        self.assertFalse(parametrization.is_two_point)
        self.assertFalse(parametrization.brightness_only)
        numpy.testing.assert_allclose(parametrization.positions(0.5), [-0.5, 0.5])
        numpy.testing.assert_allclose(parametrization.position_derivatives(0.5), [-1., 2.])
        numpy.testing.assert_allclose(parametrization.brightness(0.5), [2 / 3, 1 / 3])
        numpy.testing.assert_allclose(parametrization.brightness_derivatives(0.5), [0., 0.])
        scene = parametrization.scene(0.5, n_photons=4)
        self.assertEqual(scene.theta, 0.5)
        self.assertEqual(scene.n_photons, 4.)

    def test_brightness_only(self) -> None:
        parametrization = ExpressionParametrization(positions=[-1, 1], brightness=['(1 - b)/2', '(1 + b)/2'],
                                                    parameter='b')
        self.assertTrue(parametrization.brightness_only)
        self.assertEqual(parametrization.parameter, 'b')
        numpy.testing.assert_allclose(parametrization.brightness_derivatives(0.2), [-0.5, 0.5])

    def test_validation(self) -> None:
        with self.assertRaises(SceneError):
            ExpressionParametrization(positions=[], brightness=[])
        with self.assertRaises(SceneError):
            ExpressionParametrization(positions=['theta'], brightness=[0.5, 0.5])
        with self.assertRaises(SceneError) as context:
            ExpressionParametrization(positions=['theta + x'], brightness=[1])
        self.assertEqual(context.exception.value, ['x'])

    def test_serialization(self) -> None:
        parametrization = ExpressionParametrization(positions=['-theta', 'theta'], brightness=['1/2', '1/2'])
        data = parametrization.get_serialization_data()
        self.assertEqual(data['positions'], ['-theta', 'theta'])
        self.assertEqual(data['parameter'], 'theta')
        self.assertEqual(loads(dumps(parametrization)), parametrization)
