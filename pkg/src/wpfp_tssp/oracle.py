"""
Analytic reference for the WFP equation with a quadratic potential
V(x) = c2 x^2 / 2 + c1 x.

For quadratic V the nonlocal term is exactly the classical force term, so a
Gaussian stays Gaussian. Its mean m and covariance S obey

    dm/dt = A m + b,                  A = [[0, 1], [-c2, -2 gamma]], b = (0, -c1)
    dS/dt = A S + S A^T + 2 Diff,     Diff = [[Dqq, Dpq], [Dpq, Dpp]]

Both are solved in closed form with matrix exponentials: the mean through the
augmented 3 x 3 system, the covariance through the block matrix
[[-A, 2 Diff], [0, A^T]].
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .config.config_models import PhysicalParams, RunConfig
from .errors import ConfigurationError, NumericError
from .grid import GaussianIC, GridSpec, WignerField
from .operators.potential import ExternalPotential
from .utils.linalg import matrix_exp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentState:
    """Mean (m_x, m_xi) and 2 x 2 phase-space covariance of a Gaussian field at time t."""
    mean: np.ndarray
    cov: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64).reshape(2)
        cov = np.asarray(self.cov, dtype=np.float64).reshape(2, 2)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.cov))


def quadratic_coefficients(params: PhysicalParams) -> tuple[float, float]:
    """(c2, c1) of the potential, or ConfigurationError for a non-quadratic one."""
    potential = params.potential
    quad = potential.quadratic_coefficients() if isinstance(potential, ExternalPotential) else None
    if quad is None:
        raise ConfigurationError(f"analytic reference needs a quadratic external potential, got {potential}",
                                 field="potential")
    return quad


def moment_state_of_ic(ic: GaussianIC, epsilon: float) -> MomentState:
    ic = ic.normalized()
    return MomentState(np.array([ic.x0, ic.xi0]), ic.covariance(epsilon), 0.0)


def drift_matrix(params: PhysicalParams, quad: tuple[float, float]) -> tuple[np.ndarray, np.ndarray]:
    c2, c1 = quad
    A = np.array([[0.0, 1.0], [-c2, -2.0 * params.gamma]])
    b = np.array([0.0, -c1])
    return A, b


def diffusion_matrix(params: PhysicalParams) -> np.ndarray:
    return np.array([[params.Dqq, params.Dpq], [params.Dpq, params.Dpp]])


def evolve_moments(state: MomentState, params: PhysicalParams, quad: tuple[float, float],
                   t: float) -> MomentState:
    """Advance a moment state by time t (t >= 0)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    A, b = drift_matrix(params, quad)

    augmented = np.zeros((3, 3))
    augmented[:2, :2] = A
    augmented[:2, 2] = b
    flow = matrix_exp(augmented * t)
    mean = flow[:2, :2] @ state.mean + flow[:2, 2]

    block = np.zeros((4, 4))
    block[:2, :2] = -A
    block[:2, 2:] = 2.0 * diffusion_matrix(params)
    block[2:, 2:] = A.T
    F = matrix_exp(block * t)
    phi = F[2:, 2:].T
    noise = F[2:, 2:].T @ F[:2, 2:]
    cov = phi @ state.cov @ phi.T + noise

    result = MomentState(mean, cov, state.t + t)
    if not (result.cov[0, 0] > 0 and result.det > 0):
        raise NumericError("moment covariance lost positive definiteness",
                           diagnostics={"t": result.t, "det": result.det})
    return result


def harmonic_moment_evolution(ic: GaussianIC, epsilon: float, params: PhysicalParams,
                              quad: tuple[float, float], T: float) -> MomentState:
    """
    Mean and covariance at time T of the Gaussian initial data under
    V = c2 x^2 / 2 + c1 x.
    """
    state = evolve_moments(moment_state_of_ic(ic, epsilon), params, quad, T)
    logger.debug(f"oracle t={T}: mean={state.mean}, det(cov)={state.det:.6e}")
    return state


def gaussian_from_moments(ms: MomentState, grid: GridSpec) -> WignerField:
    """Sample the unit-mass Gaussian with the given mean and covariance."""
    if not (ms.cov[0, 0] > 0 and ms.det > 0):
        raise NumericError("covariance is not positive definite", diagnostics={"det": ms.det})
    precision = np.linalg.inv(ms.cov)
    dx = grid.x[:, None] - ms.mean[0]
    dxi = grid.xi[None, :] - ms.mean[1]
    quad = precision[0, 0] * dx ** 2 + 2.0 * precision[0, 1] * dx * dxi + precision[1, 1] * dxi ** 2
    values = np.exp(-0.5 * quad) / (2.0 * math.pi * math.sqrt(ms.det))
    return WignerField(grid, values, time=ms.t)


def moments_from_field(W: WignerField) -> MomentState:
    """Mean and covariance of W by rectangle-rule quadrature (unit mass assumed after normalizing)."""
    grid = W.grid
    weights = W.values * grid.cell_area
    mass = float(np.sum(weights))
    if mass == 0.0:
        raise NumericError("moments of a zero-mass field", diagnostics={"time": W.time})
    X = np.broadcast_to(grid.x[:, None], grid.shape)
    P = np.broadcast_to(grid.xi[None, :], grid.shape)
    mx = float(np.sum(weights * X)) / mass
    mp = float(np.sum(weights * P)) / mass
    dx = X - mx
    dp = P - mp
    cov = np.array([[np.sum(weights * dx * dx), np.sum(weights * dx * dp)],
                    [np.sum(weights * dx * dp), np.sum(weights * dp * dp)]]) / mass
    return MomentState(np.array([mx, mp]), cov, W.time)


def reference_field(config: RunConfig, grid: GridSpec | None = None) -> WignerField:
    """Oracle field at the configuration's final time T."""
    quad = quadratic_coefficients(config.params)
    state = harmonic_moment_evolution(config.ic, config.params.epsilon, config.params, quad, config.T)
    return gaussian_from_moments(state, grid or config.grid)
