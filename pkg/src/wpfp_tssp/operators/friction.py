"""
Friction split step for dW/dt = 2 gamma d/dxi (xi W).

Two discretizations of the same subproblem:

* collocation (default): nodal values, spectral differentiation matrix D,
  W <- exp(2 gamma A dt) W with Lambda = diag(xi_k) and
  A = (I + Lambda D + D Lambda) / 2;
* Galerkin: xi-Fourier coefficients, What <- exp(2 gamma B dt) What with
  B = (I + 2 E + F + G) / 2 and G[k, l] = k / (l - k).

Both generators write d/dxi (xi W) as (W + xi dW/dxi + d/dxi (xi W)) / 2.
The transport part is antisymmetric (skew-Hermitian for Galerkin), so
||p||_2 = exp(gamma dt) for every N.

Propagators depend only on (N, c, d, gamma, dt) and are cached.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, TypeAlias

import numpy as np

from ..errors import ConfigurationError, GridMismatchError
from ..grid import GridSpec, WignerField
from ..utils.fft import forward, inverse, real_part
from ..utils.linalg import matrix_exp

logger = logging.getLogger(__name__)

FrictionVariant: TypeAlias = Literal["collocation", "galerkin"]
GridKey: TypeAlias = tuple[int, float, float]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _check_step(gamma: float, dt: float) -> None:
    if not gamma >= 0:
        raise ConfigurationError(f"must be >= 0, got {gamma}", field="physics.gamma")
    if not dt > 0:
        raise ConfigurationError(f"must be > 0, got {dt}", field="run.dt")


@dataclass(frozen=True)
class FrictionDiffMatrix:
    """d[k, j] = (-1)^(k+j) (pi / (d - c)) cot(pi (k - j) / N), zero diagonal."""
    d: np.ndarray
    grid_key: GridKey


@lru_cache(maxsize=None)
def _diffmatrix(N: int, c: float, d: float) -> np.ndarray:
    k = np.arange(N)
    diff = k[:, None] - k[None, :]
    sign = np.where((k[:, None] + k[None, :]) % 2 == 0, 1.0, -1.0)
    off = diff != 0
    out = np.zeros((N, N))
    out[off] = sign[off] * (np.pi / (d - c)) / np.tan(np.pi * diff[off] / N)
    return _readonly(out)


def build_friction_diffmatrix(grid: GridSpec) -> FrictionDiffMatrix:
    return FrictionDiffMatrix(_diffmatrix(*grid.momentum_key()), grid.momentum_key())


@dataclass(frozen=True)
class FrictionPropagator:
    """
    Dense N x N propagator for one friction substep.

    For the collocation variant ``p`` acts on nodal xi-vectors; for the
    Galerkin variant it acts on xi-Fourier coefficient vectors.
    """
    p: np.ndarray
    gamma: float
    dt: float
    grid_key: GridKey
    variant: FrictionVariant = "collocation"

    def check_grid(self, grid: GridSpec) -> None:
        if self.grid_key != grid.momentum_key():
            raise GridMismatchError(f"friction propagator built for {self.grid_key}, field has {grid.momentum_key()}")


@lru_cache(maxsize=64)
def _collocation_propagator(N: int, c: float, d: float, gamma: float, dt: float) -> np.ndarray:
    logger.info(f"构建摩擦传播矩阵 (collocation) N={N}, gamma={gamma}, dt={dt}")
    return _readonly(matrix_exp(collocation_generator(N, c, d, gamma) * dt))


def collocation_generator(N: int, c: float, d: float, gamma: float) -> np.ndarray:
    """2 gamma A = gamma (I + Lambda D + D Lambda)."""
    xi = c + np.arange(N) * (d - c) / N
    D = _diffmatrix(N, c, d)
    return gamma * (np.eye(N) + xi[:, None] * D + D * xi[None, :])


def build_friction_propagator(grid: GridSpec, gamma: float, dt: float) -> FrictionPropagator:
    """p = exp(gamma (I + Lambda D + D Lambda) dt), cached under (N, c, d, gamma, dt)."""
    _check_step(gamma, dt)
    key = grid.momentum_key()
    if gamma == 0:
        return FrictionPropagator(_readonly(np.eye(grid.N)), 0.0, dt, key)
    return FrictionPropagator(_collocation_propagator(*key, float(gamma), float(dt)), gamma, dt, key)


def step_friction_collocation(W: WignerField, prop: FrictionPropagator) -> WignerField:
    """Left-multiply every x-row (as a xi-vector) by p, as one dense product."""
    prop.check_grid(W.grid)
    if prop.variant != "collocation":
        raise ConfigurationError(f"expected a collocation propagator, got {prop.variant}", field="run.friction")
    return W.with_values(W.values @ prop.p.T)


@dataclass(frozen=True)
class GalerkinFrictionMatrices:
    """
    e = diag(i pi (d + c) / (d - c) k), f[k, l] = l / (l - k) for l != k.

    Indices are Fourier mode numbers in DFT order.
    """
    e: np.ndarray
    f: np.ndarray
    grid_key: GridKey


@lru_cache(maxsize=None)
def _galerkin_matrices(N: int, c: float, d: float) -> tuple[np.ndarray, np.ndarray]:
    modes = np.fft.fftfreq(N, d=1.0 / N).round()
    e = np.diag(1j * np.pi * (d + c) / (d - c) * modes)
    diff = modes[None, :] - modes[:, None]
    off = diff != 0
    f = np.zeros((N, N))
    f[off] = np.broadcast_to(modes[None, :], (N, N))[off] / diff[off]
    return _readonly(e), _readonly(f)


def build_galerkin_friction_matrices(grid: GridSpec) -> GalerkinFrictionMatrices:
    e, f = _galerkin_matrices(*grid.momentum_key())
    return GalerkinFrictionMatrices(e, f, grid.momentum_key())


@lru_cache(maxsize=64)
def _galerkin_propagator(N: int, c: float, d: float, gamma: float, dt: float) -> np.ndarray:
    logger.info(f"构建摩擦传播矩阵 (galerkin) N={N}, gamma={gamma}, dt={dt}")
    p = matrix_exp(galerkin_generator(N, c, d, gamma) * dt)
    # the -N/2 mode has no partner; project so real data stays real
    mirror = (-np.arange(N)) % N
    p = 0.5 * (p + np.conj(p[np.ix_(mirror, mirror)]))
    return _readonly(p)


def galerkin_generator(N: int, c: float, d: float, gamma: float) -> np.ndarray:
    """2 gamma B = gamma (I + 2 E + F + G), G[k, l] = k / (l - k)."""
    e, f = _galerkin_matrices(N, c, d)
    # f + g = (l + k) / (l - k) off the diagonal
    g = f - np.where(np.eye(N, dtype=bool), 0.0, 1.0)
    return gamma * (np.eye(N) + 2.0 * e + f + g)


def build_galerkin_propagator(grid: GridSpec, gamma: float, dt: float) -> FrictionPropagator:
    """P = exp(gamma (I + 2 E + F + G) dt) acting on xi-Fourier coefficients."""
    _check_step(gamma, dt)
    key = grid.momentum_key()
    if gamma == 0:
        return FrictionPropagator(_readonly(np.eye(grid.N, dtype=np.complex128)), 0.0, dt, key, "galerkin")
    return FrictionPropagator(_galerkin_propagator(*key, float(gamma), float(dt)), gamma, dt, key, "galerkin")


def step_friction_galerkin(W: WignerField, mats: GalerkinFrictionMatrices, gamma: float,
                           dt: float) -> WignerField:
    """xi-DFT of every row, multiply by the Galerkin propagator, inverse DFT."""
    if mats.grid_key != W.grid.momentum_key():
        raise GridMismatchError(f"Galerkin matrices built for {mats.grid_key}, field has {W.grid.momentum_key()}")
    prop = build_galerkin_propagator(W.grid, gamma, dt)
    return apply_galerkin_propagator(W, prop)


def apply_galerkin_propagator(W: WignerField, prop: FrictionPropagator) -> WignerField:
    prop.check_grid(W.grid)
    if prop.variant != "galerkin":
        raise ConfigurationError(f"expected a galerkin propagator, got {prop.variant}", field="run.friction")
    if prop.gamma == 0:
        return W.copy()
    coeffs = forward(W.values, axes=(1,)) @ prop.p.T
    return W.with_values(real_part(inverse(coeffs, axes=(1,)), stage="friction-galerkin"))


def build_propagator(grid: GridSpec, gamma: float, dt: float, variant: FrictionVariant) -> FrictionPropagator:
    match variant:
        case "collocation":
            return build_friction_propagator(grid, gamma, dt)
        case "galerkin":
            return build_galerkin_propagator(grid, gamma, dt)
    raise ConfigurationError(f"unknown friction variant {variant!r}", field="run.friction")


def apply_friction(W: WignerField, prop: FrictionPropagator) -> WignerField:
    if prop.variant == "galerkin":
        return apply_galerkin_propagator(W, prop)
    return step_friction_collocation(W, prop)
