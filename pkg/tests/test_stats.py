"""
Tests for the sampler statistics.
"""

import unittest

from minorforge.graph import VertexPath
from minorforge.stats import (
    canonical_cycle,
    canonical_matching,
    chi_square_uniformity,
    cycle_uniformity,
    hamilton_cycle_count,
    matching_uniformity,
    perfect_matching_count,
    simple_fraction,
)

SIGNIFICANCE = 1e-3


class TestChiSquare(unittest.TestCase):
    """Test suite for chi_square_uniformity."""

    def test_flat_counts_pass(self) -> None:
        """Identical counts give p = 1."""
        result = chi_square_uniformity([100, 100, 100], 3)
        self.assertAlmostEqual(result.statistic, 0.0)
        self.assertAlmostEqual(result.p_value, 1.0)
        self.assertEqual(result.draws, 300)
        self.assertTrue(result.passes(0.01))

    def test_unseen_outcomes_are_padded(self) -> None:
        """Missing outcomes count as zero and sink the p-value."""
        result = chi_square_uniformity([500, 500], 3)
        self.assertEqual(result.observed_outcomes, 2)
        self.assertFalse(result.passes(0.01))

    def test_too_many_outcomes_fail(self) -> None:
        """More distinct outcomes than the support is a failure."""
        result = chi_square_uniformity([10, 10, 10, 10], 3)
        self.assertFalse(result.passes(0.01))


class TestCanonicalForms(unittest.TestCase):
    """Test suite for canonical forms and support sizes."""

    def test_canonical_matching(self) -> None:
        """Partner array to sorted pairs."""
        self.assertEqual(canonical_matching((3, 2, 1, 0)), ((0, 3), (1, 2)))

    def test_canonical_cycle(self) -> None:
        """Rotations and reflections collapse."""
        expected = (0, 1, 3, 2)
        for order in [(2, 0, 1, 3), (0, 2, 3, 1), (3, 2, 0, 1)]:
            with self.subTest(order=order):
                self.assertEqual(canonical_cycle(VertexPath(order)), expected)

    def test_counts(self) -> None:
        """(2m-1)!! matchings and (n-1)!/2 cycles."""
        self.assertEqual(perfect_matching_count(4), 3)
        self.assertEqual(perfect_matching_count(6), 15)
        self.assertEqual(perfect_matching_count(0), 1)
        self.assertEqual(hamilton_cycle_count(4), 3)
        self.assertEqual(hamilton_cycle_count(5), 12)


class TestSamplerUniformity(unittest.TestCase):
    """Chi-square checks over small enumerable spaces."""

    def test_matchings(self) -> None:
        """Perfect matchings on 4 and 6 vertices."""
        for n, seed in [(4, 1), (6, 2)]:
            with self.subTest(n=n):
                result = matching_uniformity(n, 10_000, seed)
                self.assertEqual(result.support_size, perfect_matching_count(n))
                self.assertTrue(result.passes(SIGNIFICANCE))

    def test_hamilton_cycles(self) -> None:
        """Hamilton cycles on 4 and 5 vertices."""
        for n, seed in [(4, 3), (5, 4)]:
            with self.subTest(n=n):
                result = cycle_uniformity(n, 10_000, seed)
                self.assertEqual(result.observed_outcomes, hamilton_cycle_count(n))
                self.assertTrue(result.passes(SIGNIFICANCE))

    def test_simple_fraction(self) -> None:
        """About e^-2 of the G*(500, 3) draws are simple."""
        fraction = simple_fraction(500, 3, 5_000, seed=0)
        self.assertGreaterEqual(fraction, 0.10)
        self.assertLessEqual(fraction, 0.17)


if __name__ == "__main__":
    unittest.main()
