"""
Tests for the friction substep: collocation matrix, propagator caching and the Galerkin variant.
"""
import math
import unittest

import numpy as np

from src.wpfp_tssp.errors import ConfigurationError, GridMismatchError
from src.wpfp_tssp.grid import WignerField, build_grid, total_mass
from src.wpfp_tssp.operators.friction import (apply_friction, build_friction_diffmatrix, build_friction_propagator,
                                              build_galerkin_friction_matrices, build_galerkin_propagator,
                                              build_propagator, collocation_generator, galerkin_generator,
                                              step_friction_collocation, step_friction_galerkin)

from .oracles import expm_eig


def characteristic_solution(grid, gamma, t):
    """W(xi, t) = e^(2 gamma t) exp(-(xi e^(2 gamma t))^2) for W0 = exp(-xi^2)."""
    s = math.exp(2 * gamma * t)
    return np.tile(s * np.exp(-(grid.xi * s) ** 2), (grid.M, 1))


class TestDiffMatrix(unittest.TestCase):

    def test_four_point_matrix(self):
        grid = build_grid(-2, 2, -2, 2, 4, 4)
        d = build_friction_diffmatrix(grid).d
        q = math.pi / 4
        expected = np.array([[0, q, 0, -q],
                             [-q, 0, q, 0],
                             [0, -q, 0, q],
                             [q, 0, -q, 0]])
        np.testing.assert_allclose(d, expected, rtol=0, atol=1e-15)

    def test_structure(self):
        """Test zero diagonal, zero row sums and antisymmetry."""
        grid = build_grid(-1, 1, -3, 5, 4, 16)
        d = build_friction_diffmatrix(grid).d
        np.testing.assert_array_equal(np.diag(d), 0)
        np.testing.assert_allclose(d.sum(axis=1), 0, rtol=0, atol=1e-13)
        np.testing.assert_allclose(d, -d.T, rtol=0, atol=1e-14)

    def test_differentiates_trigonometric_polynomials(self):
        grid = build_grid(-1, 1, -3, 5, 4, 16)
        nu1 = 2 * math.pi / (grid.d - grid.c)
        P = grid.xi - grid.c
        f = np.sin(nu1 * P) + 0.5 * np.cos(3 * nu1 * P)
        df = nu1 * np.cos(nu1 * P) - 1.5 * nu1 * np.sin(3 * nu1 * P)
        np.testing.assert_allclose(build_friction_diffmatrix(grid).d @ f, df, rtol=0, atol=1e-12)


class TestCollocationPropagator(unittest.TestCase):

    def test_zero_gamma_is_identity(self):
        grid = build_grid(-2, 2, -2, 2, 4, 8)
        prop = build_friction_propagator(grid, 0.0, 0.1)
        np.testing.assert_array_equal(prop.p, np.eye(8))

    def test_matches_eigen_decomposition(self):
        grid = build_grid(-2, 2, -2, 2, 4, 8)
        gamma, dt = 0.5, 0.1
        d = build_friction_diffmatrix(grid).d
        generator = gamma * (np.eye(8) + grid.xi[:, None] * d + d * grid.xi[None, :]) * dt
        expected, cond = expm_eig(generator)
        prop = build_friction_propagator(grid, gamma, dt)
        tol = 1e-12 * max(1.0, cond) * np.max(np.abs(expected))
        np.testing.assert_allclose(prop.p, expected, rtol=0, atol=tol)

    def test_semigroup(self):
        grid = build_grid(-4, 4, -4, 4, 4, 32)
        half = build_friction_propagator(grid, 0.3, 0.05).p
        full = build_friction_propagator(grid, 0.3, 0.1).p
        np.testing.assert_allclose(half @ half, full, rtol=0, atol=1e-11 * np.max(np.abs(full)))

    def test_cached_by_grid_and_step(self):
        grid = build_grid(-2, 2, -2, 2, 4, 16)
        other = build_grid(-5, 5, -2, 2, 8, 16)
        first = build_friction_propagator(grid, 0.2, 0.01)
        self.assertIs(build_friction_propagator(other, 0.2, 0.01).p, first.p)
        self.assertIsNot(build_friction_propagator(grid, 0.2, 0.02).p, first.p)

    def test_invalid_arguments(self):
        grid = build_grid(-2, 2, -2, 2, 4, 8)
        with self.assertRaises(ConfigurationError):
            build_friction_propagator(grid, -0.1, 0.1)
        with self.assertRaises(ConfigurationError):
            build_friction_propagator(grid, 0.1, 0.0)

    def test_grid_mismatch(self):
        prop = build_friction_propagator(build_grid(-2, 2, -2, 2, 4, 8), 0.1, 0.1)
        W = WignerField(build_grid(-2, 2, -2, 2, 4, 16), np.zeros((4, 16)))
        with self.assertRaises(GridMismatchError):
            step_friction_collocation(W, prop)

    def test_transport_part_is_antisymmetric(self):
        grid = build_grid(-1, 1, -3, 5, 4, 16)
        transport = collocation_generator(*grid.momentum_key(), 0.7) - 0.7 * np.eye(16)
        np.testing.assert_allclose(transport, -transport.T, rtol=0, atol=1e-13)

    def test_norm_does_not_grow_with_resolution(self):
        """Test ||p||_2 = exp(gamma dt) and rho(p) <= exp(2 gamma dt) on the steady-state xi interval."""
        gamma, dt = 1.0, 2.0 ** -8
        for N in (64, 128, 256):
            with self.subTest(N=N):
                p = build_friction_propagator(build_grid(-4, 4, -4, 4, 4, N), gamma, dt).p
                np.testing.assert_allclose(p @ p.T, math.exp(2 * gamma * dt) * np.eye(N), rtol=0, atol=1e-12)
                self.assertLessEqual(np.max(np.abs(np.linalg.eigvals(p))), math.exp(2 * gamma * dt))

    def test_seam_node_stays_bounded(self):
        """Test that a spike at xi = c does not grow faster than exp(gamma t) over t = 8."""
        grid = build_grid(-1, 1, -4, 4, 4, 128)
        p = build_friction_propagator(grid, 1.0, 2.0 ** -8).p
        v = np.zeros(128)
        v[0] = 1.0
        for _ in range(2048):
            v = p @ v
        self.assertLessEqual(np.linalg.norm(v), math.exp(8.0) * (1 + 1e-9))

    def test_characteristics(self):
        """Test against the exact contraction of exp(-xi^2) for gamma = 1, t = 0.1."""
        grid = build_grid(-1, 1, -8, 8, 4, 128)
        W = WignerField(grid, np.tile(np.exp(-grid.xi ** 2), (grid.M, 1)))
        out = step_friction_collocation(W, build_friction_propagator(grid, 1.0, 0.1))
        np.testing.assert_allclose(out.values, characteristic_solution(grid, 1.0, 0.1), rtol=0, atol=1e-6)
        self.assertAlmostEqual(total_mass(out) / total_mass(W), 1.0, delta=1e-8)


class TestGalerkinFriction(unittest.TestCase):

    def setUp(self):
        self.grid = build_grid(-1, 1, -8, 8, 4, 128)
        self.W = WignerField(self.grid, np.tile(np.exp(-self.grid.xi ** 2), (self.grid.M, 1)))

    def test_symmetric_interval_has_no_e_term(self):
        mats = build_galerkin_friction_matrices(self.grid)
        np.testing.assert_array_equal(mats.e, 0)
        shifted = build_galerkin_friction_matrices(build_grid(-1, 1, -2, 6, 4, 8))
        self.assertNotEqual(np.max(np.abs(shifted.e)), 0)

    def test_f_matrix_entries(self):
        f = build_galerkin_friction_matrices(build_grid(-1, 1, -1, 1, 4, 4)).f
        # modes in DFT order: 0, 1, -2, -1
        self.assertEqual(f[0, 1], 1.0)
        self.assertEqual(f[1, 0], 0.0)
        self.assertAlmostEqual(f[1, 2], -2 / -3)
        np.testing.assert_array_equal(np.diag(f), 0)

    def test_transport_part_is_skew_hermitian(self):
        for grid in (self.grid, build_grid(-1, 1, -2, 6, 4, 8)):
            with self.subTest(c=grid.c, d=grid.d):
                transport = galerkin_generator(*grid.momentum_key(), 0.7) - 0.7 * np.eye(grid.N)
                np.testing.assert_allclose(transport, -transport.conj().T, rtol=0, atol=1e-13)

    def test_characteristics_and_agreement_with_collocation(self):
        mats = build_galerkin_friction_matrices(self.grid)
        galerkin = step_friction_galerkin(self.W, mats, 1.0, 0.1)
        collocation = step_friction_collocation(self.W, build_friction_propagator(self.grid, 1.0, 0.1))
        np.testing.assert_allclose(galerkin.values, characteristic_solution(self.grid, 1.0, 0.1), rtol=0, atol=1e-6)
        np.testing.assert_allclose(galerkin.values, collocation.values, rtol=0, atol=1e-10)

    def test_dispatch_by_variant(self):
        prop = build_propagator(self.grid, 0.5, 0.05, "galerkin")
        self.assertEqual(prop.variant, "galerkin")
        self.assertIs(prop.p, build_galerkin_propagator(self.grid, 0.5, 0.05).p)
        out = apply_friction(self.W, prop)
        self.assertTrue(np.isrealobj(out.values))
        with self.assertRaises(ConfigurationError):
            build_propagator(self.grid, 0.5, 0.05, "spectral")
        with self.assertRaises(ConfigurationError):
            step_friction_collocation(self.W, prop)


if __name__ == '__main__':
    unittest.main()
