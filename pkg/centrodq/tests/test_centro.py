import unittest

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from centrodq import centro, kernel
from centrodq.analysis import random_centro, random_skew_centro, spectrum_distance
from centrodq.centro import CentroBlocks, SkewCentroBlocks, VectorLabel
from centrodq.errors import ClassificationMismatchError, InvalidArgumentError, SingularMatrixError
from centrodq.kernel import OpCounter
from centrodq.weights import Symmetry, classify_symmetry

ORACLE_SIZES = (4, 6, 8, 10)
ORACLE_SEEDS = range(25)


def close(got: float, expected: float, rtol: float = 1e-8) -> bool:
    return abs(got - expected) <= rtol * max(abs(expected), 1.0)


class TestReverse(unittest.TestCase):

    def test_sides(self):
        m = np.arange(6.0).reshape(2, 3)
        np.testing.assert_array_equal(centro.reverse_apply(m, "left"), m[::-1])
        np.testing.assert_array_equal(centro.reverse_apply(m, "right"), m[:, ::-1])
        np.testing.assert_array_equal(centro.reverse_apply(m, "both"), m[::-1, ::-1])
        with self.assertRaises(InvalidArgumentError):
            centro.reverse_apply(m, "up")

    @given(arrays(np.float64, st.integers(1, 12), elements=st.floats(-1e6, 1e6)))
    def test_involution(self, v):
        np.testing.assert_array_equal(centro.reverse_apply(centro.reverse_apply(v)), v)

    def test_even_half_blocks_need_no_multiplies(self):
        counter = OpCounter()
        centro.half_blocks(random_centro(6, np.random.default_rng(0)), counter)
        self.assertEqual(counter.multiplies, 0)
        self.assertEqual(counter.adds, 18)


class TestBlocks(unittest.TestCase):

    def test_split_and_assemble(self):
        rng = np.random.default_rng(1)
        for n in (2, 3, 6, 7):
            for blocks in (random_centro(n, rng), random_skew_centro(n, rng)):
                q = blocks.assemble()
                self.assertIs(classify_symmetry(q), blocks.symmetry)
                again = centro.split(q, blocks.symmetry)
                np.testing.assert_array_equal(again.assemble(), q)
                self.assertIs(type(again), type(blocks))

    def test_odd_skew_center_is_zero(self):
        q = random_skew_centro(5, np.random.default_rng(2)).assemble()
        self.assertEqual(q[2, 2], 0.0)

    def test_split_rejects_wrong_class(self):
        q = random_centro(6, np.random.default_rng(3)).assemble()
        with self.assertRaises(ClassificationMismatchError):
            centro.split(q, Symmetry.SKEW_CENTRO)
        with self.assertRaises(InvalidArgumentError):
            centro.split(q, Symmetry.NONE)

    def test_structured(self):
        rng = np.random.default_rng(4)
        self.assertIsNone(centro.structured(rng.uniform(-1.0, 1.0, (5, 5))))
        self.assertIsInstance(centro.structured(random_skew_centro(4, rng).assemble()), SkewCentroBlocks)

    def test_blocks_need_matching_shapes(self):
        with self.assertRaises(InvalidArgumentError):
            CentroBlocks(np.eye(2), np.eye(3))

    def test_similarity_transform(self):
        rng = np.random.default_rng(5)
        for n in (6, 7):
            t = centro.similarity_transform(n)
            np.testing.assert_allclose(t.T @ t, np.eye(n), atol=1e-15)
            blocks = random_centro(n, rng)
            reduced = t.T @ blocks.assemble() @ t
            s, k = centro.half_blocks(blocks)
            size = s.shape[0]
            np.testing.assert_allclose(reduced[:size, :size], s, atol=1e-14)
            np.testing.assert_allclose(reduced[size:, size:], k, atol=1e-14)
            np.testing.assert_allclose(reduced[:size, size:], 0.0, atol=1e-14)

    def test_kron_class(self):
        self.assertIs(centro.kron_class(Symmetry.CENTRO, Symmetry.CENTRO), Symmetry.CENTRO)
        self.assertIs(centro.kron_class(Symmetry.SKEW_CENTRO, Symmetry.SKEW_CENTRO), Symmetry.CENTRO)
        self.assertIs(centro.kron_class(Symmetry.CENTRO, Symmetry.SKEW_CENTRO), Symmetry.SKEW_CENTRO)
        with self.assertRaises(InvalidArgumentError):
            centro.kron_class(Symmetry.NONE, Symmetry.CENTRO)
        rng = np.random.default_rng(6)
        p = random_skew_centro(4, rng).assemble()
        q = random_skew_centro(3, rng).assemble()
        self.assertIs(classify_symmetry(np.kron(p, q)), Symmetry.CENTRO)


class TestDeterminant(unittest.TestCase):

    def test_skew_sign(self):
        b = centro.split(np.array([[1.0, -2.0], [2.0, -1.0]]), Symmetry.SKEW_CENTRO)
        self.assertAlmostEqual(centro.det_skew(b), 3.0, places=14)

    def test_centro_example(self):
        self.assertAlmostEqual(centro.det_centro(centro.split(np.array([[2., 1.], [1., 2.]]), Symmetry.CENTRO)), 3.0)

    def test_against_dense(self):
        for n in ORACLE_SIZES + (5, 7):
            for seed in ORACLE_SEEDS:
                rng = np.random.default_rng([seed, n])
                for blocks in (random_centro(n, rng), random_skew_centro(n, rng)):
                    expected = np.linalg.det(blocks.assemble())
                    if isinstance(blocks, SkewCentroBlocks):
                        got = centro.det_skew(blocks)
                    else:
                        got = centro.det_centro(blocks)
                    self.assertTrue(close(got, expected), f"n={n} seed={seed} {blocks.symmetry.value}")

    def test_odd_skew_is_singular(self):
        b = random_skew_centro(7, np.random.default_rng(7))
        self.assertEqual(centro.det_skew(b), 0.0)
        with self.assertRaises(SingularMatrixError):
            centro.inv_skew(b)

    def test_wrong_class(self):
        with self.assertRaises(InvalidArgumentError):
            centro.det_centro(random_skew_centro(4, np.random.default_rng(0)))
        with self.assertRaises(InvalidArgumentError):
            centro.det_skew(random_centro(4, np.random.default_rng(0)))


class TestInverse(unittest.TestCase):

    def test_against_dense(self):
        for n in ORACLE_SIZES:
            for seed in ORACLE_SEEDS:
                rng = np.random.default_rng([seed, n])
                for blocks in (random_centro(n, rng), random_skew_centro(n, rng)):
                    q = blocks.assemble()
                    if isinstance(blocks, SkewCentroBlocks):
                        inverse = centro.inv_skew(blocks)
                    else:
                        inverse = centro.inv_centro(blocks)
                    self.assertIs(type(inverse), type(blocks))
                    expected = np.linalg.inv(q)
                    scale = max(float(np.max(np.abs(expected))), 1.0)
                    self.assertLessEqual(np.max(np.abs(inverse.assemble() - expected)), 1e-8 * scale,
                                         f"n={n} seed={seed} {blocks.symmetry.value}")

    def test_odd_centro(self):
        blocks = random_centro(7, np.random.default_rng(8))
        inverse = centro.inv_centro(blocks).assemble()
        np.testing.assert_allclose(inverse @ blocks.assemble(), np.eye(7), atol=1e-9)

    def test_singular_half_block_is_named(self):
        blocks = CentroBlocks(np.eye(2), np.eye(2)[::-1])
        with self.assertRaises(SingularMatrixError) as ctx:
            centro.inv_centro(blocks)
        self.assertEqual(ctx.exception.factor, "A-JC")

    def test_costs_a_quarter(self):
        n = 64
        blocks = random_centro(n, np.random.default_rng(9))
        dense, factored = OpCounter(), OpCounter()
        kernel.lu_inverse(blocks.assemble(), dense)
        centro.inv_centro(blocks, factored)
        self.assertLessEqual(factored.multiplies / dense.multiplies, 0.30)


class TestEigen(unittest.TestCase):

    def test_centro_against_dense(self):
        for n in ORACLE_SIZES + (5, 7):
            for seed in ORACLE_SEEDS:
                blocks = random_centro(n, np.random.default_rng([seed, n]))
                pairs = centro.eig_centro(blocks, vectors=False)
                got = np.array([p.eigenvalue for p in pairs])
                self.assertLessEqual(spectrum_distance(got, np.linalg.eigvals(blocks.assemble())), 1e-8,
                                     f"n={n} seed={seed}")

    def test_skew_against_dense(self):
        for n in ORACLE_SIZES + (5, 7):
            for seed in ORACLE_SEEDS:
                blocks = random_skew_centro(n, np.random.default_rng([seed, n]))
                pairs = centro.eig_skew(blocks, vectors=False)
                got = np.array([p.eigenvalue for p in pairs])
                self.assertLessEqual(spectrum_distance(got, np.linalg.eigvals(blocks.assemble())), 1e-8,
                                     f"n={n} seed={seed}")

    def test_skew_spectrum_is_symmetric(self):
        pairs = centro.eig_skew(random_skew_centro(8, np.random.default_rng(10)), vectors=False)
        values = np.array([p.eigenvalue for p in pairs])
        self.assertLessEqual(spectrum_distance(values, -values), 1e-10)

    def test_centro_vectors_and_labels(self):
        blocks = random_centro(8, np.random.default_rng(11))
        q = blocks.assemble()
        pairs = centro.eig_centro(blocks)
        labels = [p.label for p in pairs]
        self.assertEqual(labels.count(VectorLabel.SYMMETRIC), 4)
        self.assertEqual(labels.count(VectorLabel.SKEW_SYMMETRIC), 4)
        for p in pairs:
            v = p.eigenvector
            np.testing.assert_allclose(q @ v, p.eigenvalue * v, atol=1e-8)
            self.assertIs(centro.label_of(v), p.label)

    def test_skew_vectors(self):
        blocks = random_skew_centro(6, np.random.default_rng(12))
        q = blocks.assemble()
        for p in centro.eig_skew(blocks):
            v = p.eigenvector
            self.assertAlmostEqual(np.linalg.norm(v), 1.0, places=10)
            np.testing.assert_allclose(q @ v, p.eigenvalue * v, atol=1e-7)

    def test_wrong_class(self):
        with self.assertRaises(InvalidArgumentError):
            centro.eig_centro(random_skew_centro(4, np.random.default_rng(0)))
        with self.assertRaises(InvalidArgumentError):
            centro.eig_skew(random_centro(4, np.random.default_rng(0)))


class TestSolve(unittest.TestCase):

    def test_against_dense(self):
        rng = np.random.default_rng(13)
        for n in (4, 5, 8, 9):
            blocks = random_centro(n, rng)
            q = blocks.assemble()
            b = rng.uniform(-1.0, 1.0, (n, 3))
            expected = np.linalg.solve(q, b)
            np.testing.assert_allclose(centro.solve_centro(blocks, b), expected, atol=1e-8 * np.max(np.abs(expected)))
            np.testing.assert_allclose(centro.solve_centro(blocks, b[:, 0]), expected[:, 0],
                                       atol=1e-8 * np.max(np.abs(expected)))

    def test_rhs_length(self):
        with self.assertRaises(InvalidArgumentError):
            centro.solve_centro(random_centro(4, np.random.default_rng(0)), np.ones(3))


if __name__ == '__main__':
    unittest.main()
