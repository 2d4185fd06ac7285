"""
Tests for points, halfspaces and bisector halfspaces.
"""
from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from ..error import DimensionMismatch, NonFiniteValue, NotUnitNormal
from ..geometry import (
    HalfSpace,
    Vector,
    halfspace_from_pair,
    inner,
    norm,
    project_onto_halfspace,
)


class TestVector(TestCase):

    def test_coordinates(self):
        v = Vector([1, 2, 3])
        self.assertEqual(v.dim, 3)
        self.assertEqual(len(v), 3)
        self.assertEqual(list(v), [1.0, 2.0, 3.0])
        self.assertEqual(v[1], 2.0)
        assert_array_equal(np.asarray(v), [1.0, 2.0, 3.0])

    def test_scalar_is_one_dimensional(self):
        self.assertEqual(Vector(4.0).dim, 1)

    def test_rejects_non_finite(self):
        with self.assertRaises(NonFiniteValue):
            Vector([0.0, np.nan])
        with self.assertRaises(NonFiniteValue):
            Vector([np.inf])

    def test_rejects_bad_shapes(self):
        with self.assertRaises(DimensionMismatch):
            Vector([])
        with self.assertRaises(DimensionMismatch):
            Vector([[1.0, 2.0]])

    def test_immutable(self):
        v = Vector([1.0, 2.0])
        with self.assertRaises(ValueError):
            v.coords[0] = 5.0
        with self.assertRaises(AttributeError):
            v.extra = 1

    def test_input_is_copied(self):
        source = np.array([1.0, 2.0])
        v = Vector(source)
        source[0] = 10.0
        self.assertEqual(v[0], 1.0)

    def test_arithmetic(self):
        u, v = Vector([1.0, 2.0]), Vector([3.0, 5.0])
        self.assertEqual(u + v, Vector([4.0, 7.0]))
        self.assertEqual(v - u, Vector([2.0, 3.0]))
        self.assertEqual(u * 2, Vector([2.0, 4.0]))
        self.assertEqual(2 * u, Vector([2.0, 4.0]))
        self.assertEqual(v / 2, Vector([1.5, 2.5]))
        self.assertEqual(-u, Vector([-1.0, -2.0]))

        with self.assertRaises(DimensionMismatch):
            u + Vector([1.0])

    def test_constructors(self):
        self.assertEqual(Vector.zeros(3), Vector([0.0, 0.0, 0.0]))
        self.assertEqual(Vector.unit(3, 1), Vector([0.0, 1.0, 0.0]))

    def test_equality_and_hash(self):
        self.assertEqual(Vector([1.0, 2.0]), Vector([1.0, 2.0]))
        self.assertNotEqual(Vector([1.0, 2.0]), Vector([1.0, 2.5]))
        self.assertEqual(
            len({Vector([1.0, 2.0]), Vector([1.0, 2.0]), Vector([0.0])}),
            2,
        )


class TestInnerAndNorm(TestCase):

    def test_inner(self):
        self.assertEqual(inner(Vector([1, 0]), Vector([0, 1])), 0.0)
        self.assertEqual(inner(Vector([1, 2]), Vector([3, 4])), 11.0)
        self.assertEqual(inner(Vector([3, 4]), Vector([3, 4])), 25.0)

    def test_inner_symmetric_and_bilinear(self):
        rng = np.random.RandomState(0)
        for _ in range(50):
            u, v, w = (Vector(rng.standard_normal(4)) for _ in range(3))
            a = rng.uniform(-3, 3)
            self.assertAlmostEqual(inner(u, v), inner(v, u))
            self.assertAlmostEqual(
                inner(u * a + w, v), a * inner(u, v) + inner(w, v),
            )

    def test_inner_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            inner(Vector([1, 2]), Vector([1, 2, 3]))

    def test_norm(self):
        self.assertEqual(norm(Vector([0, 0, 0])), 0.0)
        self.assertEqual(norm(Vector([3, 4])), 5.0)
        self.assertEqual(norm(Vector([1, 1, 1, 1])), 2.0)


class TestHalfSpace(TestCase):

    def test_membership(self):
        h = HalfSpace(Vector([1.0, 0.0]), 1.0)
        self.assertIn(Vector([1.0, 5.0]), h)
        self.assertIn(Vector([-3.0, 0.0]), h)
        self.assertNotIn(Vector([1.1, 0.0]), h)
        # Within eps_feas of the boundary.
        self.assertTrue(h.contains(Vector([1.0 + 5e-10, 0.0])))
        self.assertFalse(h.contains(Vector([1.0 + 5e-10, 0.0]), eps=0.0))

    def test_whole_space(self):
        h = HalfSpace.whole(2)
        self.assertTrue(h.whole_space)
        self.assertEqual(h.dim, 2)
        self.assertIn(Vector([1e300, -1e300]), h)
        self.assertEqual(h.slack(Vector([0.0, 0.0])), np.inf)

    def test_rejects_non_unit_normal(self):
        with self.assertRaises(NotUnitNormal):
            HalfSpace(Vector([2.0, 0.0]), 1.0)

    def test_from_raw(self):
        h = HalfSpace.from_raw([0.0, 3.0], 6.0)
        self.assertEqual(h.normal, Vector([0.0, 1.0]))
        self.assertEqual(h.offset, 2.0)

        with self.assertRaises(NotUnitNormal):
            HalfSpace.from_raw([0.0, 0.0], 1.0)

    def test_from_raw_preserves_membership(self):
        rng = np.random.RandomState(1)
        for _ in range(200):
            a = rng.standard_normal(3) * rng.uniform(0.1, 10.0)
            b = rng.uniform(-5.0, 5.0)
            h = HalfSpace.from_raw(a, b)
            z = Vector(rng.uniform(-5.0, 5.0, 3))
            raw = np.dot(a, z.coords) - b
            if abs(raw) < 1e-8 * np.linalg.norm(a):
                continue
            self.assertEqual(h.contains(z), raw <= 0.0)

    def test_project_onto_halfspace(self):
        h = HalfSpace(Vector([0.0, 1.0]), 1.0)
        inside = Vector([4.0, -2.0])
        self.assertIs(project_onto_halfspace(h, inside), inside)
        self.assertEqual(
            project_onto_halfspace(h, Vector([4.0, 3.0])),
            Vector([4.0, 1.0]),
        )
        z = Vector([1.0, 2.0])
        self.assertIs(project_onto_halfspace(HalfSpace.whole(2), z), z)


class TestHalfspaceFromPair(TestCase):

    def check_bisector_properties(self, x, y, h):
        midpoint = (x + y) / 2
        self.assertAlmostEqual(h.slack(midpoint), 0.0, places=12)
        self.assertIn(y, h)
        # Strictly closer to x than to y.
        self.assertNotIn(x, h)
        self.assertNotIn(x * 0.9 + y * 0.1, h)

    def test_examples(self):
        x, y = Vector([2, 0]), Vector([0, 0])
        h = halfspace_from_pair(x, y)
        self.assertFalse(h.whole_space)
        assert_allclose(h.normal.coords, [1.0, 0.0])
        self.assertAlmostEqual(h.offset, 1.0)
        self.check_bisector_properties(x, y, h)

        h = halfspace_from_pair(Vector([5, 5]), Vector([5, 5]))
        self.assertTrue(h.whole_space)

    def test_pair_with_negative_image(self):
        # 2<z, x - y> <= |x|^2 - |y|^2 reads 2 z_1 <= -1.
        x, y = Vector([0, 0]), Vector([-1, 0])
        h = halfspace_from_pair(x, y)
        assert_allclose(h.normal.coords, [1.0, 0.0])
        self.assertAlmostEqual(h.offset, -0.5)
        self.check_bisector_properties(x, y, h)

    def test_unit_normal(self):
        h = halfspace_from_pair(Vector([3.0, -1.0, 2.0]), Vector([0.5, 4, 1]))
        self.assertAlmostEqual(norm(h.normal), 1.0, places=12)

    def test_matches_distance_characterization(self):
        rng = np.random.RandomState(2)
        checked = 0
        for _ in range(1000):
            x, y, z = (Vector(rng.uniform(-4, 4, 3)) for _ in range(3))
            margin = norm(x - z) - norm(y - z)
            if abs(margin) < 1e-6:
                continue
            self.assertEqual(halfspace_from_pair(x, y).contains(z),
                             margin >= 0.0)
            checked += 1
        self.assertGreater(checked, 900)

    def test_equal_points_accept_everything(self):
        x = Vector([1.0, -2.0])
        h = halfspace_from_pair(x, x)
        for z in (Vector([0.0, 0.0]), Vector([1e9, 1e9]), x):
            self.assertIn(z, h)

    def test_degenerate_threshold_scales_with_x(self):
        x = Vector([1e6, 0.0])
        self.assertTrue(
            halfspace_from_pair(x, Vector([1e6 + 1e-7, 0.0])).whole_space
        )
        self.assertFalse(
            halfspace_from_pair(x, Vector([1e6 + 1e-3, 0.0])).whole_space
        )
        self.assertTrue(
            halfspace_from_pair(Vector([0.0]), Vector([1e-13])).whole_space
        )

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            halfspace_from_pair(Vector([0.0]), Vector([0.0, 1.0]))
