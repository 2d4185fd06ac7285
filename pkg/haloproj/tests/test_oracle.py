"""
Tests for seeded random instances and the brute-force comparison sweep.
"""
import logging
from unittest import TestCase

import numpy as np
from numpy.testing import assert_array_equal

from ..error import ConstraintBudgetExceeded
from ..oracle import (
    RandomInstance,
    oracle_compare,
    oracle_sweep,
    random_polyhedron_instance,
)


class TestRandomInstance(TestCase):

    def test_deterministic(self):
        inst = RandomInstance(seed=1, dimension=2, num_constraints=3)
        (p1, x1), (p2, x2) = (
            random_polyhedron_instance(inst),
            random_polyhedron_instance(inst),
        )
        self.assertEqual(len(p1), 3)
        assert_array_equal(p1.normals, p2.normals)
        assert_array_equal(p1.offsets, p2.offsets)
        self.assertEqual(x1, x2)

    def test_seeds_differ(self):
        p1, x1 = random_polyhedron_instance(RandomInstance(1, 2, 3))
        p2, x2 = random_polyhedron_instance(RandomInstance(2, 2, 3))
        self.assertFalse(np.array_equal(p1.normals, p2.normals))
        self.assertNotEqual(x1, x2)

    def test_ranges(self):
        for seed in range(20):
            poly, x0 = random_polyhedron_instance(RandomInstance(seed, 5, 12))
            assert_array_equal(
                np.abs(np.linalg.norm(poly.normals, axis=1) - 1.0) < 1e-12,
                True,
            )
            self.assertTrue(np.all(np.abs(poly.offsets) <= 2.0 + 1e-12))
            self.assertTrue(np.all(np.abs(x0.coords) <= 3.0))

    def test_budget(self):
        with self.assertRaises(ConstraintBudgetExceeded):
            random_polyhedron_instance(RandomInstance(0, 2, 13))

    def test_for_sweep(self):
        dims = [RandomInstance.for_sweep(s).dimension for s in range(6)]
        self.assertEqual(dims, [2, 3, 5, 2, 3, 5])
        counts = {RandomInstance.for_sweep(s).num_constraints
                  for s in range(100)}
        self.assertEqual(counts, set(range(11)))


class TestOracleCompare(TestCase):

    def test_agreement(self):
        report = oracle_compare(RandomInstance(7, 3, 6))
        self.assertTrue(report.kind_match)
        self.assertTrue(report.agrees, report.describe())

    def test_infeasible_instance_agrees(self):
        # Search a few seeds for an empty polyhedron.
        for seed in range(200):
            report = oracle_compare(RandomInstance(seed, 2, 12))
            if not report.fast.is_point:
                break
        else:
            self.skipTest("No infeasible instance among the first seeds.")
        self.assertTrue(report.agrees, report.describe())
        self.assertIsNone(report.distance)
        self.assertFalse(report.oracle.is_point)

    def test_sweep(self):
        disagreements = oracle_sweep(range(1000))
        self.assertEqual(
            disagreements, [], [r.describe() for r in disagreements],
        )

    def test_sweep_logs(self):
        with self.assertLogs('haloproj.test', level='INFO') as logs:
            oracle_sweep(range(5), logger=logging.getLogger('haloproj.test'))
        self.assertIn('5 instance(s), 0 disagreement(s)', logs.output[-1])
