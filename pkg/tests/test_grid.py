"""
Tests for the phase-space grid, the Wigner field container and the Gaussian initial data.
"""
import math
import unittest

import numpy as np

from src.wpfp_tssp.errors import ConfigurationError, GridMismatchError, NumericError
from src.wpfp_tssp.grid import (GaussianIC, WignerField, build_grid, error_norms, gaussian_wavepacket,
                                total_mass)


class TestBuildGrid(unittest.TestCase):
    """Tests for grid construction."""

    def test_harmonic_preset_grid(self):
        """Test spacing and node placement on [-2, 2]^2 with 2^7 nodes."""
        grid = build_grid(-2, 2, -2, 2, 128, 128)
        self.assertEqual(grid.h_x, 1 / 32)
        self.assertEqual(grid.x[0], -2.0)
        self.assertAlmostEqual(grid.x[-1], 2 - 1 / 32, places=15)
        self.assertEqual(grid.shape, (128, 128))

    def test_frequency_tables_in_dft_order(self):
        """Test that mu follows the FFT index order 0, 1, ..., -n/2, ..., -1."""
        grid = build_grid(-2, 2, 0, 2 * math.pi, 8, 4)
        np.testing.assert_array_equal(grid.mode_x, [0, 1, 2, 3, -4, -3, -2, -1])
        np.testing.assert_allclose(grid.mu, np.array([0, 1, 2, 3, -4, -3, -2, -1]) * math.pi / 2, rtol=0, atol=1e-15)
        np.testing.assert_allclose(grid.nu, [0, 1, -2, -1], rtol=0, atol=1e-15)

    def test_tables_are_read_only(self):
        grid = build_grid(-1, 1, -1, 1, 4, 4)
        with self.assertRaises(ValueError):
            grid.x[0] = 5.0

    def test_invalid_sizes(self):
        """Test that odd, small and non-integer sizes are rejected."""
        for M in (5, 2, 0, 7.5):
            with self.subTest(M=M):
                with self.assertRaises(ConfigurationError) as ctx:
                    build_grid(-1, 1, -1, 1, M, 8)
                self.assertEqual(ctx.exception.field, "grid.M")
        with self.assertRaises(ConfigurationError):
            build_grid(-1, 1, -1, 1, 8, 3)

    def test_invalid_bounds(self):
        with self.assertRaises(ConfigurationError):
            build_grid(1, 1, -1, 1, 8, 8)
        with self.assertRaises(ConfigurationError):
            build_grid(-1, 1, 2, -2, 8, 8)
        with self.assertRaises(ConfigurationError):
            build_grid(-math.inf, 1, -1, 1, 8, 8)


class TestWignerField(unittest.TestCase):

    def setUp(self):
        self.grid = build_grid(-1, 1, -1, 1, 4, 6)

    def test_shape_mismatch(self):
        with self.assertRaises(GridMismatchError):
            WignerField(self.grid, np.zeros((6, 4)))

    def test_non_finite(self):
        values = np.zeros(self.grid.shape)
        values[1, 2] = np.nan
        with self.assertRaises(NumericError) as ctx:
            WignerField(self.grid, values)
        self.assertEqual(ctx.exception.diagnostics["count"], 1)

    def test_error_norms(self):
        """Test rectangle-rule L2 and max norm of a constant difference."""
        W = WignerField(self.grid, np.zeros(self.grid.shape))
        V = W.with_values(np.full(self.grid.shape, 0.5))
        l2, linf = error_norms(W, V)
        self.assertAlmostEqual(linf, 0.5)
        self.assertAlmostEqual(l2, 0.5 * math.sqrt(4.0), places=14)

    def test_error_norms_on_different_grids(self):
        other = build_grid(-1, 1, -1, 1, 4, 4)
        with self.assertRaises(GridMismatchError):
            error_norms(WignerField(self.grid, np.zeros(self.grid.shape)), WignerField(other, np.zeros((4, 4))))


class TestGaussianWavepacket(unittest.TestCase):

    def setUp(self):
        self.grid = build_grid(-2, 2, -2, 2, 128, 128)
        self.ic = GaussianIC(a11=-1, a22=-1, a12=0, x0=0.1, xi0=-0.2)

    def test_negative_coefficients_are_normalized_with_warning(self):
        """Test that a11 = a22 = -1 is read as +1 and logged."""
        with self.assertLogs("src.wpfp_tssp.grid", level="WARNING"):
            ic = self.ic.normalized()
        self.assertEqual((ic.a11, ic.a22, ic.a12), (1, 1, 0))

    def test_indefinite_form_rejected(self):
        with self.assertRaises(ConfigurationError):
            gaussian_wavepacket(GaussianIC(a11=1, a22=1, a12=2), 0.1, self.grid)

    def test_unit_mass_and_peak(self):
        """Test the discrete mass of the ex1 packet and its peak value 1 / (pi eps)."""
        with self.assertLogs("src.wpfp_tssp.grid", level="WARNING"):
            W = gaussian_wavepacket(self.ic, 0.1, self.grid)
        self.assertAlmostEqual(total_mass(W), 1.0, delta=1e-10)
        self.assertLessEqual(W.values.max(), 1 / (math.pi * 0.1))

    def test_renormalize(self):
        grid = build_grid(-1, 1, -1, 1, 16, 16)
        W = gaussian_wavepacket(GaussianIC(a11=1, a22=1), 1.0, grid, renormalize=True)
        self.assertAlmostEqual(total_mass(W), 1.0, delta=1e-14)

    def test_exchange_symmetry(self):
        """Test that swapping (a11, x0) with (a22, xi0) transposes the field on a square grid."""
        ic = GaussianIC(a11=2.0, a22=0.5, a12=0.0, x0=0.3, xi0=-0.4)
        swapped = GaussianIC(a11=0.5, a22=2.0, a12=0.0, x0=-0.4, xi0=0.3)
        W = gaussian_wavepacket(ic, 0.1, self.grid)
        Ws = gaussian_wavepacket(swapped, 0.1, self.grid)
        np.testing.assert_allclose(Ws.values, W.values.T, rtol=0, atol=1e-12)

    def test_non_positive_epsilon(self):
        with self.assertRaises(ConfigurationError):
            gaussian_wavepacket(GaussianIC(a11=1, a22=1), 0.0, self.grid)


if __name__ == '__main__':
    unittest.main()
