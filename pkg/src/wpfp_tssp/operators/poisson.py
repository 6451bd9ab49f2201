"""
Periodic Poisson solve V'' = alpha * rho and the self-consistent delta-V table.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, GridMismatchError
from ..grid import GridSpec, WignerField
from ..utils.fft import forward, inverse
from .potential import DeltaVTable

logger = logging.getLogger(__name__)


def density(W: WignerField) -> np.ndarray:
    """rho[m] = h_xi * sum_l W[m, l]"""
    return W.grid.h_xi * np.sum(W.values, axis=1)


@dataclass(frozen=True)
class PotentialField:
    """
    Fourier coefficients of V in DFT order, normalized so that
    V(x) = sum_j vhat[j] exp(i mu_j (x - a)).
    """
    vhat: np.ndarray
    time_tag: float = 0.0

    def values(self) -> np.ndarray:
        """V on the x nodes."""
        M = self.vhat.shape[0]
        return M * np.real(inverse(self.vhat, axes=(0,)))


def solve_poisson(rho: np.ndarray, alpha: int, grid: GridSpec, time_tag: float = 0.0) -> PotentialField:
    """
    vhat[j] = -alpha * rhohat[j] / mu_j^2 for j != 0, vhat[0] = 0.

    The mean of rho is removed first: a periodic Poisson problem needs a
    zero-mean source.
    """
    rho = np.asarray(rho, dtype=np.float64)
    if rho.shape != (grid.M,):
        raise GridMismatchError(f"density has shape {rho.shape}, expected ({grid.M},)")
    mean = float(np.mean(rho))
    logger.debug(f"Poisson 源项去均值 {mean:.6e}")
    rhohat = forward(rho - mean, axes=(0,)) / grid.M
    mu2 = grid.mu * grid.mu
    vhat = np.zeros(grid.M, dtype=np.complex128)
    nonzero = grid.mode_x != 0
    vhat[nonzero] = -alpha * rhohat[nonzero] / mu2[nonzero]
    return PotentialField(vhat, time_tag)


def build_delta_v_selfconsistent(pf: PotentialField, grid: GridSpec, epsilon: float) -> DeltaVTable:
    """
    entries[m, k] = (i/eps) sum_j vhat[j] exp(i mu_j (x_m - a)) 2i sin(eps mu_j nu_k / 2)

    The -M/2 coefficient has no conjugate partner and would give delta V a
    real part, so it is left out of the sum.
    """
    if not epsilon > 0:
        raise ConfigurationError(f"must be > 0, got {epsilon}", field="physics.epsilon")
    if pf.vhat.shape != (grid.M,):
        raise GridMismatchError(f"vhat has shape {pf.vhat.shape}, expected ({grid.M},)")
    vhat = pf.vhat.copy()
    vhat[grid.mode_x == -grid.M // 2] = 0.0
    sines = np.sin(0.5 * epsilon * np.outer(grid.mu, grid.nu))
    # sum over j of vhat[j] sines[j, k] exp(2 pi i j m / M) is M * ifft along j
    entries = (-2.0 / epsilon) * grid.M * inverse(vhat[:, None] * sines, axes=(0,))
    # real part is round-off; delta V of a real potential is imaginary
    entries = 1j * entries.imag
    return DeltaVTable(np.ascontiguousarray(entries), time_tag=pf.time_tag)
