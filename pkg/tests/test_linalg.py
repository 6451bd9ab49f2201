"""
Tests for the dense matrix exponential.
"""
import unittest

import numpy as np
from scipy.linalg import expm

from src.wpfp_tssp.errors import NumericError
from src.wpfp_tssp.utils.linalg import matrix_exp

from .oracles import expm_eigh


class TestMatrixExp(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_zero_matrix(self):
        np.testing.assert_array_equal(matrix_exp(np.zeros((5, 5))), np.eye(5))

    def test_nilpotent(self):
        """Test exp([[0, 1], [0, 0]]) = [[1, 1], [0, 1]]."""
        np.testing.assert_allclose(matrix_exp(np.array([[0.0, 1.0], [0.0, 0.0]])), [[1, 1], [0, 1]],
                                   rtol=0, atol=1e-15)

    def test_diagonal(self):
        d = np.array([-3.0, -0.5, 0.0, 1.0, 2.5])
        np.testing.assert_allclose(matrix_exp(np.diag(d)), np.diag(np.exp(d)), rtol=1e-14)

    def test_symmetric_against_eigh(self):
        B = self.rng.standard_normal((8, 8))
        A = 0.5 * (B + B.T)
        expected = expm_eigh(A)
        np.testing.assert_allclose(matrix_exp(A), expected, rtol=0, atol=1e-12 * np.max(np.abs(expected)))

    def test_inverse_of_skew_matrix(self):
        """Test exp(A) exp(-A) = I for a skew-symmetric matrix of norm about 10."""
        B = self.rng.standard_normal((6, 6))
        A = B - B.T
        A *= 10.0 / np.linalg.norm(A, 2)
        np.testing.assert_allclose(matrix_exp(A) @ matrix_exp(-A), np.eye(6), rtol=0, atol=1e-12)

    def test_commutes_with_transpose_and_similarity(self):
        A = 0.3 * self.rng.standard_normal((5, 5))
        np.testing.assert_allclose(matrix_exp(A.T), matrix_exp(A).T, rtol=0, atol=1e-14)
        S = np.eye(5) + 0.1 * self.rng.standard_normal((5, 5))
        S_inv = np.linalg.inv(S)
        np.testing.assert_allclose(matrix_exp(S @ A @ S_inv), S @ matrix_exp(A) @ S_inv, rtol=0, atol=1e-12)

    def test_complex_against_scipy(self):
        for scale in (1e-3, 0.5, 4.0):
            with self.subTest(scale=scale):
                A = scale * (self.rng.standard_normal((6, 6)) + 1j * self.rng.standard_normal((6, 6))) / 6
                expected = expm(A)
                result = matrix_exp(A)
                self.assertEqual(result.dtype, np.complex128)
                np.testing.assert_allclose(result, expected, rtol=0, atol=1e-11 * np.max(np.abs(expected)))

    def test_invalid_input(self):
        with self.assertRaises(NumericError):
            matrix_exp(np.zeros((2, 3)))
        with self.assertRaises(NumericError):
            matrix_exp(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_overflow(self):
        with self.assertRaises(NumericError) as ctx:
            matrix_exp(1000.0 * np.eye(3))
        self.assertIn("squarings", ctx.exception.diagnostics)


if __name__ == '__main__':
    unittest.main()
