import math
import unittest
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from centrodq import analysis
from centrodq.errors import InvalidArgumentError
from centrodq.grid import make_chebyshev, make_uniform
from centrodq.tests.utils import symmetric_grids


class TestTruncationProfile(unittest.TestCase):

    def test_monomials_are_exact(self):
        for g in symmetric_grids(range(2, 13)):
            for p in range(g.n):
                report = analysis.profile_builtin(g, f"monomial:{p}")
                scale = max(1.0, float(p))
                self.assertLessEqual(report.max_error, 1e-9 * scale, f"{g.kind.value} n={g.n} p={p}")

    def test_exp_error_peaks_at_an_end(self):
        report = analysis.profile_builtin(make_uniform(8), "exp")
        self.assertIn(report.argmax, (1, 8))

    def test_error_peaks_near_the_ends(self):
        for n in (8, 10):
            ends = (1, 2, n - 1, n)
            for g in (make_uniform(n), make_chebyshev(n)):
                for name in ("exp", "sin2pi"):
                    self.assertIn(analysis.profile_builtin(g, name).argmax, ends, f"{name} {g.kind.value} n={n}")

    def test_higher_order_profile(self):
        g = make_chebyshev(9)
        report = analysis.profile_builtin(g, "monomial:5", order=3)
        self.assertEqual(report.order, 3)
        self.assertLessEqual(report.max_error, 1e-7)
        second = analysis.profile_builtin(make_uniform(12), "sin2pi", order=2)
        self.assertLess(second.max_error, 1.0)

    def test_length_mismatch(self):
        g = make_uniform(5)
        with self.assertRaises(InvalidArgumentError):
            analysis.truncation_profile(g, np.ones(4), np.ones(5))

    def test_report_with_bound(self):
        g = make_uniform(8)
        report = analysis.profile_builtin(g, "exp", k_bound=math.e)
        data = report.to_repr()
        self.assertEqual(len(data["errors"]), 8)
        self.assertEqual(len(data["estimate"]), 8)
        self.assertGreater(data["end_bound"], data["center_bound"])
        self.assertEqual(len(report.csv_rows()), 8)
        # the measured error never exceeds the estimate with the true bound on f^(n)
        self.assertTrue(np.all(np.abs(report.errors) <= report.estimate * (1 + 1e-6)))

    def test_report_without_bound(self):
        data = analysis.profile_builtin(make_uniform(6), "runge").to_repr()
        self.assertNotIn("estimate", data)
        self.assertEqual(data["function"], "runge")


class TestBuiltinFunctions(unittest.TestCase):

    def test_derivatives_against_differences(self):
        x = np.linspace(0.05, 0.95, 7)
        h = 1e-5
        for name in ("exp", "sin2pi", "runge", "monomial:3"):
            fn = analysis.builtin_function(name)
            first = (fn(x + h, 0) - fn(x - h, 0)) / (2 * h)
            np.testing.assert_allclose(fn(x, 1), first, rtol=1e-6, atol=1e-6, err_msg=name)
            second = (fn(x + h, 1) - fn(x - h, 1)) / (2 * h)
            np.testing.assert_allclose(fn(x, 2), second, rtol=1e-5, atol=1e-4, err_msg=name)

    def test_unknown_names(self):
        for name in ("cos", "monomial:x", "monomial:-1"):
            with self.assertRaises(InvalidArgumentError):
                analysis.builtin_function(name)
        with self.assertRaises(InvalidArgumentError):
            analysis.builtin_function("runge")(np.zeros(2), 3)


class TestBounds(unittest.TestCase):

    def test_ratio_for_eight_nodes(self):
        self.assertEqual(analysis.bound_ratio(8), Fraction(35))
        end, center = analysis.error_bounds(8, 1.0)
        self.assertAlmostEqual(end / center, 35.0, places=10)

    def test_four_nodes(self):
        end, center = analysis.error_bounds(4, 1.0)
        self.assertAlmostEqual(end, 1.0 / 108.0, places=15)
        self.assertIsNotNone(center)

    @given(st.integers(min_value=2, max_value=30), st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=40, deadline=None)
    def test_linear_in_k(self, n, k):
        end, center = analysis.error_bounds(n, k)
        end2, center2 = analysis.error_bounds(n, 2 * k)
        self.assertAlmostEqual(end2 / end, 2.0, places=12)
        if n % 2:
            self.assertIsNone(center)
        else:
            self.assertAlmostEqual(center2 / center, 2.0, places=12)

    def test_center_below_end(self):
        for n in range(4, 31, 2):
            end, center = analysis.error_bounds(n, 1.0)
            self.assertLess(center, end)

    def test_odd_has_no_center(self):
        self.assertIsNone(analysis.error_bounds(7, 1.0)[1])
        with self.assertRaises(InvalidArgumentError):
            analysis.bound_ratio(7)

    def test_invalid_k(self):
        for k in (0.0, -1.0):
            with self.assertRaises(InvalidArgumentError):
                analysis.error_bounds(8, k)

    def test_estimate_meets_bounds_on_uniform_grid(self):
        g = make_uniform(8)
        estimate = analysis.error_estimate(g, 2.0)
        end, center = analysis.error_bounds(8, 2.0)
        self.assertAlmostEqual(estimate[0] / end, 1.0, places=12)
        self.assertAlmostEqual(estimate[-1] / end, 1.0, places=12)
        self.assertAlmostEqual(estimate[3] / center, 1.0, places=12)


class TestBench(unittest.TestCase):

    def test_ratios_at_sixty_four(self):
        report = analysis.bench_structured([64], seed=1)
        self.assertLessEqual(report.ratio("inv", 64), 0.30)
        self.assertLessEqual(report.ratio("det", 64), 0.30)
        self.assertLessEqual(report.ratio("eig", 64), 0.35)

    def test_ratio_series_non_increasing(self):
        report = analysis.bench_structured([16, 32, 64, 128], ops=("det", "inv"), seed=2)
        for op in ("det", "inv"):
            for symmetry in ("centro", "skew-centro"):
                ratios = [r for _, r in report.series(op, symmetry)]
                self.assertEqual(len(ratios), 4)
                for previous, current in zip(ratios, ratios[1:]):
                    self.assertLessEqual(current, previous, f"{op} {symmetry}")

    def test_small_size_never_costs_more(self):
        report = analysis.bench_structured([4], trials=3, seed=3)
        for row in report.rows:
            self.assertLessEqual(row.ratio, 1.0, row)

    def test_results_agree(self):
        report = analysis.bench_structured([8, 16], trials=2, seed=4)
        self.assertTrue(report.agrees, [row for row in report.rows if row.discrepancy > analysis.AGREEMENT_TOL])

    def test_deterministic(self):
        first = analysis.bench_structured([8, 16], trials=2, seed=5, workers=2)
        second = analysis.bench_structured([8, 16], trials=2, seed=5, workers=1)
        self.assertEqual(first.to_repr(), second.to_repr())

    def test_resources(self):
        report = analysis.bench_structured([4], ops=("det",), measure_resources=True)
        self.assertGreaterEqual(report.resources["cpu_seconds"], 0.0)
        self.assertGreater(report.resources["wall_seconds"], 0.0)
        self.assertGreater(report.resources["rss_bytes"], 0)
        self.assertIn("resources", report.to_repr())

    def test_invalid(self):
        for sizes in ([], [5], [2]):
            with self.assertRaises(InvalidArgumentError):
                analysis.bench_structured(sizes)
        with self.assertRaises(InvalidArgumentError):
            analysis.bench_structured([8], ops=("lu",))
        with self.assertRaises(InvalidArgumentError):
            analysis.bench_structured([8], trials=0)


if __name__ == '__main__':
    unittest.main()
