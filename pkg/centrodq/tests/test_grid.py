import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from centrodq.errors import DegenerateGridError, InvalidArgumentError
from centrodq.grid import (Grid, GridKind, check_symmetry, make_chebyshev, make_custom, make_grid,
                           make_supported_chebyshev, make_uniform, member_grid, symmetry_defect)


class TestGrid(unittest.TestCase):

    def test_uniform_nodes(self):
        g = make_uniform(5)
        self.assertEqual(g.kind, GridKind.UNIFORM)
        np.testing.assert_allclose(g.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertEqual(g.span, 1.0)

    def test_chebyshev_nodes_inside_unit_interval(self):
        g = make_chebyshev(8)
        self.assertTrue(np.all(g.nodes > 0.0) and np.all(g.nodes < 1.0))
        self.assertTrue(np.all(np.diff(g.nodes) > 0.0))
        expected = (1.0 - math.cos(math.pi / 16)) / 2.0
        self.assertAlmostEqual(g.nodes[0], expected, places=15)

    def test_odd_chebyshev_has_exact_center(self):
        self.assertEqual(make_chebyshev(7).nodes[3], 0.5)

    @given(st.integers(min_value=2, max_value=64))
    @settings(max_examples=40, deadline=None)
    def test_builtin_grids_are_mirror_symmetric(self, n):
        self.assertEqual(symmetry_defect(make_uniform(n)), 0.0)
        self.assertEqual(symmetry_defect(make_chebyshev(n)), 0.0)

    def test_supported_chebyshev(self):
        g = make_supported_chebyshev(8)
        self.assertEqual(g.kind, GridKind.SUPPORTED_CHEBYSHEV)
        self.assertEqual((g.nodes[0], g.nodes[-1]), (0.0, 1.0))
        np.testing.assert_array_equal(g.nodes[1:-1], make_chebyshev(6).nodes)
        np.testing.assert_array_equal(make_supported_chebyshev(3).nodes, [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(make_supported_chebyshev(2).nodes, [0.0, 1.0])
        self.assertEqual(make_grid("chebyshev-supported", 8), g)

    @given(st.integers(min_value=2, max_value=64))
    @settings(max_examples=30, deadline=None)
    def test_supported_chebyshev_is_mirror_symmetric(self, n):
        self.assertEqual(symmetry_defect(make_supported_chebyshev(n)), 0.0)

    def test_member_grid(self):
        self.assertEqual(member_grid(make_chebyshev(7)), make_supported_chebyshev(7))
        for g in (make_uniform(7), make_custom([0.0, 0.2, 1.0]), make_supported_chebyshev(5)):
            self.assertIs(member_grid(g), g)

    def test_too_few_nodes(self):
        for n in (-1, 0, 1):
            with self.assertRaises(InvalidArgumentError):
                make_uniform(n)
            with self.assertRaises(InvalidArgumentError):
                make_chebyshev(n)

    def test_nodes_are_read_only(self):
        g = make_uniform(4)
        with self.assertRaises(ValueError):
            g.nodes[0] = 0.3

    def test_custom_grid(self):
        g = make_custom([1.0, 0.0, 0.4])
        np.testing.assert_array_equal(g.nodes, [0.0, 0.4, 1.0])
        self.assertFalse(check_symmetry(g))
        self.assertTrue(check_symmetry(make_custom([0.0, 0.3, 0.7, 1.0])))

    def test_custom_grid_rejects_bad_nodes(self):
        with self.assertRaises(DegenerateGridError):
            make_custom([0.0, 0.5, 0.5, 1.0])
        with self.assertRaises(InvalidArgumentError):
            make_custom([0.0, 1.5])
        with self.assertRaises(InvalidArgumentError):
            make_custom([0.0, float("nan"), 1.0])

    def test_symmetry_tolerance_must_be_positive(self):
        with self.assertRaises(InvalidArgumentError):
            check_symmetry(make_uniform(4), 0.0)

    def test_repr(self):
        g = make_chebyshev(6)
        data = g.to_repr()
        self.assertEqual(data["kind"], "chebyshev")
        self.assertEqual(data["n"], 6)
        self.assertEqual(Grid.from_repr(data), g)
        self.assertEqual(hash(Grid.from_repr(data)), hash(g))

    def test_factory(self):
        self.assertEqual(make_grid("uniform", 4), make_uniform(4))
        self.assertEqual(make_grid(GridKind.CHEBYSHEV, 4), make_chebyshev(4))
        with self.assertRaises(InvalidArgumentError):
            make_grid("custom", 4)
        with self.assertRaises(ValueError):
            make_grid("random", 4)


if __name__ == '__main__':
    unittest.main()
