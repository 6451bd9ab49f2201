"""
Truncated periodic phase-space grid, the Wigner field container and the
Gaussian wavepacket initial condition.
"""
import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Self

import numpy as np

from .errors import ConfigurationError, GridMismatchError, NumericError

logger = logging.getLogger(__name__)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform periodic grid on [a, b) x [c, d) with M x N nodes.

    Frequency tables ``mu`` and ``nu`` are in DFT index order, so ``mu[j]``
    multiplies the j-th output of a forward FFT along x.
    """
    a: float
    b: float
    c: float
    d: float
    M: int
    N: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.M, self.N)

    @property
    def h_x(self) -> float:
        return (self.b - self.a) / self.M

    @property
    def h_xi(self) -> float:
        return (self.d - self.c) / self.N

    @property
    def cell_area(self) -> float:
        return self.h_x * self.h_xi

    @cached_property
    def x(self) -> np.ndarray:
        return _readonly(self.a + np.arange(self.M) * self.h_x)

    @cached_property
    def xi(self) -> np.ndarray:
        return _readonly(self.c + np.arange(self.N) * self.h_xi)

    @cached_property
    def mode_x(self) -> np.ndarray:
        """Integer mode numbers j in DFT index order."""
        return _readonly(np.fft.fftfreq(self.M, d=1.0 / self.M).round().astype(int))

    @cached_property
    def mode_xi(self) -> np.ndarray:
        return _readonly(np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(int))

    @cached_property
    def mu(self) -> np.ndarray:
        return _readonly(2.0 * np.pi * self.mode_x / (self.b - self.a))

    @cached_property
    def nu(self) -> np.ndarray:
        return _readonly(2.0 * np.pi * self.mode_xi / (self.d - self.c))

    def momentum_key(self) -> tuple[int, float, float]:
        """Identity of the momentum discretization (what friction operators depend on)."""
        return (self.N, self.c, self.d)


def build_grid(a: float, b: float, c: float, d: float, M: int, N: int) -> GridSpec:
    """
    构建相空间网格

    Raises:
        ConfigurationError: odd or too small M/N, inverted or non-finite bounds
    """
    for name, n in (("M", M), ("N", N)):
        if isinstance(n, bool) or int(n) != n:
            raise ConfigurationError(f"must be an integer, got {n!r}", field=f"grid.{name}")
        if n < 4 or int(n) % 2 != 0:
            raise ConfigurationError(f"must be even and >= 4, got {n}", field=f"grid.{name}")
    bounds = (a, b, c, d)
    if not all(math.isfinite(v) for v in bounds):
        raise ConfigurationError(f"bounds must be finite, got {bounds}", field="grid")
    if not b > a:
        raise ConfigurationError(f"need b > a, got a={a}, b={b}", field="grid.b")
    if not d > c:
        raise ConfigurationError(f"need d > c, got c={c}, d={d}", field="grid.d")
    grid = GridSpec(float(a), float(b), float(c), float(d), int(M), int(N))
    logger.debug(f"grid [{a}, {b}] x [{c}, {d}], M={M}, N={N}, h_x={grid.h_x}, h_xi={grid.h_xi}")
    return grid


@dataclass
class WignerField:
    """
    Samples of W on the grid, x-major: ``values[m, l] = W(x_m, xi_l, t)``.
    """
    grid: GridSpec
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(f"values shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            bad = int(np.count_nonzero(~np.isfinite(self.values)))
            raise NumericError("Wigner field has non-finite entries",
                               diagnostics={"count": bad, "time": self.time})

    def with_values(self, values: np.ndarray, time: Optional[float] = None) -> Self:
        return replace(self, values=values, time=self.time if time is None else time)

    def copy(self) -> Self:
        return replace(self, values=self.values.copy())


@dataclass(frozen=True)
class GaussianIC:
    """
    W0 = sqrt(a11 a22 - a12^2) / (pi eps)
         * exp(-[a11 (x-x0)^2 + a22 (xi-xi0)^2 + 2 a12 (x-x0)(xi-xi0)] / eps)
    """
    a11: float
    a22: float
    a12: float = 0.0
    x0: float = 0.0
    xi0: float = 0.0

    def normalized(self) -> Self:
        """
        Return the positive-definite form used for sampling.

        Negative diagonal coefficients are replaced by their absolute values
        (the sign of a12 is kept) and a warning is logged.
        """
        ic = self
        if self.a11 < 0 or self.a22 < 0:
            ic = replace(self, a11=abs(self.a11), a22=abs(self.a22))
            logger.warning(
                f"高斯初值系数 a11={self.a11}, a22={self.a22} 非正定，"
                f"按绝对值解释为 a11={ic.a11}, a22={ic.a22}")
        if not (ic.a11 > 0 and ic.a11 * ic.a22 - ic.a12 ** 2 > 0):
            raise ConfigurationError(
                f"quadratic form is not positive definite (a11={ic.a11}, a22={ic.a22}, a12={ic.a12})",
                field="initial")
        return ic

    def form_matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])

    def covariance(self, epsilon: float) -> np.ndarray:
        """Phase-space covariance (eps/2) * inv(form) of the normalized wavepacket."""
        return 0.5 * epsilon * np.linalg.inv(self.normalized().form_matrix())


def gaussian_wavepacket(ic: GaussianIC, epsilon: float, grid: GridSpec,
                        renormalize: bool = False) -> WignerField:
    """
    Sample the Gaussian wavepacket on the grid at t = 0.

    Args:
        ic: coefficients, normalized through :meth:`GaussianIC.normalized`
        epsilon: semiclassical parameter, > 0
        grid: target grid
        renormalize: rescale to unit discrete mass
    """
    if not epsilon > 0:
        raise ConfigurationError(f"must be > 0, got {epsilon}", field="physics.epsilon")
    ic = ic.normalized()
    dx = grid.x[:, None] - ic.x0
    dxi = grid.xi[None, :] - ic.xi0
    quad = ic.a11 * dx ** 2 + ic.a22 * dxi ** 2 + 2.0 * ic.a12 * dx * dxi
    amplitude = math.sqrt(ic.a11 * ic.a22 - ic.a12 ** 2) / (math.pi * epsilon)
    values = amplitude * np.exp(-quad / epsilon)
    W = WignerField(grid, values, time=0.0)
    if renormalize:
        mass = total_mass(W)
        logger.info(f"初值离散质量 {mass:.16g}，归一化为 1")
        W = W.with_values(values / mass)
    return W


def total_mass(W: WignerField) -> float:
    return float(W.grid.cell_area * np.sum(W.values))


def check_same_grid(W: WignerField, other: WignerField) -> None:
    if W.grid != other.grid:
        raise GridMismatchError(f"fields live on different grids: {W.grid} vs {other.grid}")


def error_norms(W: WignerField, W_ref: WignerField) -> tuple[float, float]:
    """(L2, Linf) norms of W - W_ref with the rectangle-rule L2 weight."""
    check_same_grid(W, W_ref)
    diff = W.values - W_ref.values
    l2 = math.sqrt(W.grid.cell_area * float(np.sum(diff * diff)))
    linf = float(np.max(np.abs(diff)))
    return l2, linf
