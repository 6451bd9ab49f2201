"""
Tests for moments, the steady-state residual and the observable series.
"""
import math
import unittest

import numpy as np

from src.wpfp_tssp.errors import ConfigurationError, GridMismatchError, NumericError
from src.wpfp_tssp.grid import GaussianIC, WignerField, build_grid, gaussian_wavepacket
from src.wpfp_tssp.observables import (ObservableRecord, ObservableSeries, SteadyStateDetector, global_moments,
                                       local_moments, steady_state_residual)


class TestMoments(unittest.TestCase):

    def setUp(self):
        self.grid = build_grid(-2, 2, -2, 2, 128, 128)
        self.zero_v = np.zeros(self.grid.M)

    def test_zero_current_for_centered_packet(self):
        W = gaussian_wavepacket(GaussianIC(a11=1, a22=1, x0=0.1, xi0=0.0), 0.1, self.grid)
        _, j, _ = local_moments(W, self.zero_v)
        np.testing.assert_allclose(j, 0.0, rtol=0, atol=1e-12)

    def test_current_is_drift_times_density(self):
        """Test j = xi0 rho for a packet without x-xi correlation."""
        W = gaussian_wavepacket(GaussianIC(a11=1, a22=1, x0=0.1, xi0=-0.2), 0.1, self.grid)
        rho, j, _ = local_moments(W, self.zero_v)
        np.testing.assert_allclose(j, -0.2 * rho, rtol=0, atol=1e-10)

    def test_harmonic_preset_globals(self):
        """Test N = 1, J = -0.2 and E = xi0^2 / 2 + eps / 4 without potential."""
        W = gaussian_wavepacket(GaussianIC(a11=1, a22=1, x0=0.1, xi0=-0.2), 0.1, self.grid)
        N, J, E = global_moments(W, self.zero_v)
        self.assertAlmostEqual(N, 1.0, delta=1e-8)
        self.assertAlmostEqual(J, -0.2, delta=1e-8)
        self.assertAlmostEqual(E, 0.02 + 0.025, delta=1e-8)

    def test_potential_energy_weighting(self):
        W = gaussian_wavepacket(GaussianIC(a11=1, a22=1), 0.1, self.grid)
        v = np.full(self.grid.M, 2.0)
        _, _, E1 = global_moments(W, v)
        _, _, E_half = global_moments(W, v, alpha_tilde=0.5)
        N, _, E0 = global_moments(W, self.zero_v)
        self.assertAlmostEqual(E1 - E0, 2.0 * N, places=12)
        self.assertAlmostEqual(E_half - E0, 1.0 * N, places=12)

    def test_zero_field_and_linearity(self):
        W = WignerField(self.grid, np.zeros(self.grid.shape))
        self.assertEqual(global_moments(W, self.zero_v), (0.0, 0.0, 0.0))
        A = gaussian_wavepacket(GaussianIC(a11=1, a22=1, x0=0.3), 0.1, self.grid)
        B = gaussian_wavepacket(GaussianIC(a11=2, a22=1, xi0=0.4), 0.1, self.grid)
        v = np.cos(self.grid.x)
        combined = global_moments(A.with_values(2.0 * A.values - 3.0 * B.values), v)
        separate = np.subtract(2.0 * np.array(global_moments(A, v)), 3.0 * np.array(global_moments(B, v)))
        np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-12)

    def test_validation(self):
        W = WignerField(self.grid, np.zeros(self.grid.shape))
        with self.assertRaises(ConfigurationError) as ctx:
            local_moments(W, self.zero_v, alpha_tilde=2.0)
        self.assertEqual(ctx.exception.field, "alpha_tilde")
        with self.assertRaises(GridMismatchError):
            local_moments(W, np.zeros(self.grid.M - 1))


class TestSteadyStateResidual(unittest.TestCase):

    def setUp(self):
        self.grid = build_grid(-1, 1, -1, 1, 4, 4)

    def test_doubling_field(self):
        prev = WignerField(self.grid, np.ones(self.grid.shape))
        nxt = prev.with_values(2.0 * prev.values)
        self.assertAlmostEqual(steady_state_residual(prev, nxt, 0.1), 1 / (2 * 0.1))

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        prev = WignerField(self.grid, rng.standard_normal(self.grid.shape))
        nxt = prev.with_values(prev.values + 0.01 * rng.standard_normal(self.grid.shape))
        r = steady_state_residual(prev, nxt, 0.05)
        scaled = steady_state_residual(prev.with_values(7 * prev.values), nxt.with_values(7 * nxt.values), 0.05)
        self.assertAlmostEqual(r, scaled, places=12)
        self.assertEqual(steady_state_residual(prev, prev, 0.05), 0.0)

    def test_invalid(self):
        zero = WignerField(self.grid, np.zeros(self.grid.shape))
        with self.assertRaises(NumericError):
            steady_state_residual(zero, zero, 0.1)
        one = zero.with_values(np.ones(self.grid.shape))
        with self.assertRaises(ValueError):
            steady_state_residual(one, one, 0.0)


class TestObservableSeries(unittest.TestCase):

    def make_series(self):
        series = ObservableSeries()
        series.append(ObservableRecord(0.0, 2.0, 0.0, -1.0))
        series.append(ObservableRecord(0.5, 2.0002, 0.1, -0.5))
        series.append(ObservableRecord(1.0, 1.999, 0.2, -0.25))
        return series

    def test_times_strictly_increasing(self):
        series = self.make_series()
        with self.assertRaises(ValueError):
            series.append(ObservableRecord(1.0, 2.0, 0.0, 0.0))
        series.add_residual(0.5, 0.1)
        with self.assertRaises(ValueError):
            series.add_residual(0.25, 0.1)

    def test_normalized(self):
        """Test division by initial values; the zero initial J is kept raw with a warning."""
        series = self.make_series()
        with self.assertLogs("src.wpfp_tssp.observables", level="WARNING"):
            frame = series.normalized()
        self.assertEqual(list(frame.columns), ["t", "N_norm", "J_norm", "E_norm"])
        np.testing.assert_allclose(frame["N_norm"], [1.0, 1.0001, 0.9995])
        np.testing.assert_allclose(frame["J_norm"], [0.0, 0.1, 0.2])
        np.testing.assert_allclose(frame["E_norm"], [1.0, 0.5, 0.25])

    def test_mass_drift(self):
        self.assertAlmostEqual(self.make_series().mass_drift(), 0.0005, places=12)
        self.assertEqual(ObservableSeries().mass_drift(), 0.0)


class TestSteadyStateDetector(unittest.TestCase):

    RESIDUALS = [(0.0, 1.0), (1.0, 1e-4), (2.0, 1e-4), (3.0, 1e-2), (4.0, 1e-4), (5.0, 1e-4), (6.0, 1e-4)]

    def test_final_streak(self):
        detector = SteadyStateDetector(threshold=1e-3, window=3)
        for t, r in self.RESIDUALS:
            detector.feed(t, r)
        self.assertEqual(detector.verdict(), (True, 4.0))
        self.assertEqual(detector.min_residual, 1e-4)

    def test_streak_too_short(self):
        series = ObservableSeries()
        for t, r in self.RESIDUALS:
            series.add_residual(t, r)
        self.assertEqual(SteadyStateDetector.from_series(series, 1e-3, 4).verdict(), (False, None))

    def test_late_excursion_resets(self):
        detector = SteadyStateDetector(threshold=1e-3, window=2)
        for t, r in self.RESIDUALS + [(7.0, 5e-3)]:
            detector.feed(t, r)
        self.assertFalse(detector.verdict()[0])

    def test_invalid_parameters(self):
        with self.assertRaises(ValueError):
            SteadyStateDetector(threshold=0.0)
        with self.assertRaises(ValueError):
            SteadyStateDetector(window=0)


if __name__ == '__main__':
    unittest.main()
