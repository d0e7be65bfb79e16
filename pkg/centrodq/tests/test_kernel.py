import unittest

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from centrodq import kernel
from centrodq.analysis import spectrum_distance
from centrodq.errors import InvalidArgumentError, SingularMatrixError
from centrodq.kernel import OpCounter


def well_conditioned(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, (n, n)) + n * np.eye(n)


class TestLU(unittest.TestCase):

    @given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2 ** 31))
    @settings(max_examples=40, deadline=None)
    def test_det_matches_numpy(self, n, seed):
        m = np.random.default_rng(seed).uniform(-1.0, 1.0, (n, n))
        expected = np.linalg.det(m)
        self.assertAlmostEqual(kernel.lu_det(m), expected, delta=1e-10 * max(1.0, abs(expected)))

    def test_det_sign_of_permutation(self):
        self.assertEqual(kernel.lu_det(np.array([[0., 1.], [1., 0.]])), -1.0)
        self.assertEqual(kernel.lu_det(np.zeros((0, 0))), 1.0)

    def test_singular_det_is_zero(self):
        self.assertEqual(kernel.lu_det(np.array([[1., 2.], [2., 4.]])), 0.0)

    @given(arrays(np.float64, (6,), elements=st.floats(-10, 10)), st.integers(min_value=0, max_value=2 ** 31))
    @settings(max_examples=30, deadline=None)
    def test_solve(self, b, seed):
        m = well_conditioned(6, seed)
        np.testing.assert_allclose(kernel.lu_solve(m, b), np.linalg.solve(m, b), atol=1e-10)

    def test_solve_several_right_hand_sides(self):
        m = well_conditioned(5, 3)
        b = np.arange(15.0).reshape(5, 3)
        np.testing.assert_allclose(kernel.lu_solve(m, b), np.linalg.solve(m, b), atol=1e-10)

    def test_inverse(self):
        m = well_conditioned(7, 11)
        np.testing.assert_allclose(kernel.lu_inverse(m) @ m, np.eye(7), atol=1e-12)

    def test_singular_raises_with_pivot(self):
        m = np.array([[1., 2., 3.], [2., 4., 6.], [1., 0., 1.]])
        with self.assertRaises(SingularMatrixError) as ctx:
            kernel.lu_inverse(m)
        self.assertIsNotNone(ctx.exception.pivot)
        self.assertEqual(ctx.exception.exit_code, 3)

    def test_non_square(self):
        with self.assertRaises(InvalidArgumentError):
            kernel.lu_det(np.zeros((2, 3)))


class TestCounter(unittest.TestCase):

    def test_lu_counts_a_third_of_n_cubed(self):
        n = 40
        counter = OpCounter()
        kernel.lu_factor(well_conditioned(n, 1), counter)
        self.assertEqual(counter.multiplies, (n - 1) * n * (n + 1) // 3)

    def test_inverse_counts_four_thirds_of_n_cubed(self):
        n = 40
        counter = OpCounter()
        kernel.lu_inverse(well_conditioned(n, 1), counter)
        self.assertAlmostEqual(counter.multiplies / n ** 3, 4.0 / 3.0, delta=0.05)

    def test_counters_are_independent(self):
        first, second = OpCounter(), OpCounter()
        kernel.matmul(np.ones((3, 4)), np.ones((4, 2)), first)
        self.assertEqual(first.multiplies, 24)
        self.assertEqual(second.multiplies, 0)
        second.absorb(first)
        self.assertEqual(second.to_repr(), {"multiplies": 24, "adds": 18})

    def test_no_counter(self):
        np.testing.assert_allclose(kernel.matmul(np.eye(2), np.ones(2)), np.ones(2))


class TestEigen(unittest.TestCase):

    def test_diagonal(self):
        values = kernel.eig_dense(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(values, [1.0, 2.0, 3.0])

    def test_rotation_has_complex_pair(self):
        values = kernel.eig_dense(np.array([[0.0, -1.0], [1.0, 0.0]]))
        np.testing.assert_allclose(sorted(values, key=lambda v: v.imag), [-1j, 1j], atol=1e-12)

    @given(st.integers(min_value=2, max_value=14), st.integers(min_value=0, max_value=2 ** 31))
    @settings(max_examples=40, deadline=None)
    def test_matches_numpy(self, n, seed):
        m = np.random.default_rng(seed).uniform(-1.0, 1.0, (n, n))
        self.assertLessEqual(spectrum_distance(kernel.eig_dense(m), np.linalg.eigvals(m)), 1e-8)

    def test_sorted_by_real_then_imaginary(self):
        values = kernel.eig_dense(np.random.default_rng(5).uniform(-1.0, 1.0, (9, 9)))
        keys = [(v.real, v.imag) for v in values]
        self.assertEqual(keys, sorted(keys))

    def test_vectors(self):
        m = np.random.default_rng(2).uniform(-1.0, 1.0, (6, 6))
        m = m + m.T
        values, vecs = kernel.eig_dense(m, vectors=True)
        for i, value in enumerate(values):
            v = vecs[:, i]
            self.assertAlmostEqual(np.linalg.norm(v), 1.0, places=12)
            np.testing.assert_allclose(m @ v, value * v, atol=1e-8)

    def test_hessenberg_keeps_spectrum(self):
        m = np.random.default_rng(4).uniform(-1.0, 1.0, (7, 7))
        h = kernel.hessenberg(m)
        self.assertTrue(np.allclose(np.tril(h, -2), 0.0))
        self.assertLessEqual(spectrum_distance(np.linalg.eigvals(h), np.linalg.eigvals(m)), 1e-10)

    def test_realify(self):
        values = kernel.realify(np.array([1.0 + 1e-12j, 2.0 + 0.5j]))
        self.assertEqual(values[0].imag, 0.0)
        self.assertEqual(values[1].imag, 0.5)

    def test_kron(self):
        p = np.array([[1.0, 2.0], [3.0, 4.0]])
        counter = OpCounter()
        np.testing.assert_array_equal(kernel.kron(p, np.eye(2), counter), np.kron(p, np.eye(2)))
        self.assertEqual(counter.multiplies, 16)


if __name__ == '__main__':
    unittest.main()
