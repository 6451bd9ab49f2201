"""
Fourier Galerkin split steps: convection, nonlocal potential and diffusion.

Each step is a diagonal multiplier in Fourier space. The convection and
nonlocal multipliers are zero on the unpaired -n/2 mode of the axis they act
on, so they stay real-preserving and compose exactly. The diffusion multiplier
with a cross term is Hermitian-symmetrized instead.
"""
import logging

import numpy as np

from ..grid import GridSpec, WignerField
from ..utils.fft import apply_multiplier, drop_unpaired, forward, hermitian_symmetrize, inverse
from .potential import DeltaVTable

logger = logging.getLogger(__name__)


def step_convection(W: WignerField, tau: float) -> WignerField:
    """x-coefficients of row l multiplied by exp(-i mu_j xi_l tau)."""
    if tau == 0:
        return W.copy()
    grid = W.grid
    phase = np.exp(-1j * np.outer(grid.mu, grid.xi) * tau)
    multiplier = drop_unpaired(phase, axis=0)
    return W.with_values(apply_multiplier(W.values, multiplier, axes=(0,), stage="convection"))


def step_nonlocal(W: WignerField, tau: float, dv: DeltaVTable) -> WignerField:
    """xi-coefficient k of column m multiplied by exp(dv[m, k] tau)."""
    dv.check_grid(W.grid)
    if tau == 0:
        return W.copy()
    multiplier = drop_unpaired(np.exp(dv.entries * tau), axis=1)
    return W.with_values(apply_multiplier(W.values, multiplier, axes=(1,), stage="nonlocal"))


def diffusion_factors(grid: GridSpec, tau: float, Dqq: float, Dpq: float, Dpp: float) -> np.ndarray:
    """exp((-Dqq mu^2 - 2 Dpq mu nu - Dpp nu^2) tau) on the (j, k) mode grid."""
    mu = grid.mu[:, None]
    nu = grid.nu[None, :]
    return np.exp((-Dqq * mu * mu - 2.0 * Dpq * mu * nu - Dpp * nu * nu) * tau)


def step_diffusion(W: WignerField, tau: float, Dqq: float, Dpq: float, Dpp: float) -> WignerField:
    if tau == 0 or (Dqq == 0 and Dpq == 0 and Dpp == 0):
        return W.copy()
    # real and even in (j, k) except where the Dpq term meets a -n/2 mode
    multiplier = diffusion_factors(W.grid, tau, Dqq, Dpq, Dpp)
    if Dpq != 0:
        multiplier = hermitian_symmetrize(multiplier.astype(np.complex128), axes=(0, 1))
    return W.with_values(apply_multiplier(W.values, multiplier, axes=(0, 1), stage="diffusion"))


def nonlocal_generator(W: WignerField, dv: DeltaVTable) -> np.ndarray:
    """
    The nonlocal term applied to W, without time stepping:
    inverse xi-DFT of dv[m, k] * What[m, k].

    Returned as a complex array; it is real for a real potential and a
    band-limited field.
    """
    dv.check_grid(W.grid)
    return inverse(dv.entries * forward(W.values, axes=(1,)), axes=(1,))
