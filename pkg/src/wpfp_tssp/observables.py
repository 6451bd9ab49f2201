"""
Physical observables of a Wigner field.

Local moments (rectangle rule in xi):

    rho(x) = h_xi sum_l W
    j(x)   = h_xi sum_l xi_l W
    e(x)   = h_xi sum_l (xi_l^2 / 2 + alpha_tilde V(x)) W

Global moments N, J, E are the h_x weighted sums of rho, j, e.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd

from .config.config_models import PhysicalParams
from .errors import ConfigurationError, GridMismatchError, NumericError
from .grid import WignerField, check_same_grid
from .operators.poisson import density, solve_poisson
from .operators.potential import ExternalPotential

logger = logging.getLogger(__name__)


class LocalMoments(NamedTuple):
    rho: np.ndarray
    j: np.ndarray
    e: np.ndarray


class GlobalMoments(NamedTuple):
    N: float
    J: float
    E: float


def _check_alpha_tilde(alpha_tilde: float) -> None:
    if alpha_tilde not in (1.0, 0.5):
        raise ConfigurationError(f"must be 1 or 1/2, got {alpha_tilde}", field="alpha_tilde")


def local_moments(W: WignerField, v_samples: np.ndarray, alpha_tilde: float = 1.0) -> LocalMoments:
    _check_alpha_tilde(alpha_tilde)
    v = np.asarray(v_samples, dtype=np.float64)
    if v.shape != (W.grid.M,):
        raise GridMismatchError(f"potential samples have shape {v.shape}, expected ({W.grid.M},)")
    xi = W.grid.xi
    h = W.grid.h_xi
    rho = h * np.sum(W.values, axis=1)
    j = h * (W.values @ xi)
    kinetic = h * (W.values @ (0.5 * xi * xi))
    e = kinetic + alpha_tilde * v * rho
    return LocalMoments(rho, j, e)


def global_moments(W: WignerField, v_samples: np.ndarray, alpha_tilde: float = 1.0) -> GlobalMoments:
    rho, j, e = local_moments(W, v_samples, alpha_tilde)
    h = W.grid.h_x
    return GlobalMoments(float(h * np.sum(rho)), float(h * np.sum(j)), float(h * np.sum(e)))


def potential_samples(W: WignerField, params: PhysicalParams) -> np.ndarray:
    """V on the x nodes at the field's time; WPFP solves the Poisson problem from W."""
    if isinstance(params.potential, ExternalPotential):
        return np.asarray(params.potential(W.grid.x, W.time), dtype=np.float64)
    return solve_poisson(density(W), params.potential.alpha, W.grid, W.time).values()


def steady_state_residual(W_prev: WignerField, W_next: WignerField, dt: float) -> float:
    """||W_next - W_prev||_inf / (dt ||W_next||_inf)"""
    check_same_grid(W_prev, W_next)
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    scale = float(np.max(np.abs(W_next.values)))
    if scale == 0.0:
        raise NumericError("steady-state residual of a zero field", diagnostics={"time": W_next.time})
    return float(np.max(np.abs(W_next.values - W_prev.values))) / (dt * scale)


class ObservableRecord(NamedTuple):
    t: float
    N: float
    J: float
    E: float


@dataclass
class ObservableSeries:
    """
    Time series of N, J, E with optional per-snapshot local moments and
    steady-state residuals. Times are strictly increasing.
    """
    records: list[ObservableRecord] = field(default_factory=list)
    residuals: list[tuple[float, float]] = field(default_factory=list)
    snapshots: dict[float, LocalMoments] = field(default_factory=dict)

    def append(self, record: ObservableRecord) -> None:
        if self.records and not record.t > self.records[-1].t:
            raise ValueError(f"time {record.t} does not follow {self.records[-1].t}")
        self.records.append(record)

    def add_residual(self, t: float, residual: float) -> None:
        if self.residuals and not t > self.residuals[-1][0]:
            raise ValueError(f"time {t} does not follow {self.residuals[-1][0]}")
        self.residuals.append((t, residual))

    @property
    def initial(self) -> Optional[ObservableRecord]:
        return self.records[0] if self.records else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=["t", "N", "J", "E"])

    def residual_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.residuals, columns=["t", "residual"])

    def normalized(self) -> pd.DataFrame:
        """N, J, E divided by their initial values; a zero initial value is left as is."""
        frame = self.to_frame()
        out = pd.DataFrame({"t": frame["t"]})
        for name in ("N", "J", "E"):
            column = frame[name]
            initial = float(column.iloc[0]) if len(column) else 0.0
            if initial == 0.0 or not math.isfinite(initial):
                logger.warning(f"{name} 初值为 {initial}，该列不做归一化")
                out[f"{name}_norm"] = column
            else:
                out[f"{name}_norm"] = column / initial
        return out

    def mass_drift(self) -> float:
        """max |N(t) - N(0)| / |N(0)|"""
        if not self.records:
            return 0.0
        n = np.array([r.N for r in self.records])
        return float(np.max(np.abs(n - n[0])) / abs(n[0]))


class SteadyStateDetector:
    """
    Declares a steady state once the residual stays below ``threshold`` for
    at least ``window`` consecutive records up to the end of the run.
    ``t_steady`` is the time of the first record of that final streak.
    """

    def __init__(self, threshold: float = 1e-3, window: int = 16) -> None:
        if not threshold > 0:
            raise ValueError(f"threshold must be > 0, got {threshold}")
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        self.threshold = threshold
        self.window = window
        self._streak_start: Optional[float] = None
        self._streak = 0
        self.min_residual = math.inf

    def feed(self, t: float, residual: float) -> None:
        self.min_residual = min(self.min_residual, residual)
        if residual < self.threshold:
            if self._streak == 0:
                self._streak_start = t
            self._streak += 1
        else:
            self._streak = 0
            self._streak_start = None

    def verdict(self) -> tuple[bool, Optional[float]]:
        if self._streak >= self.window:
            return True, self._streak_start
        return False, None

    @classmethod
    def from_series(cls, series: ObservableSeries, threshold: float = 1e-3,
                    window: int = 16) -> "SteadyStateDetector":
        detector = cls(threshold, window)
        for t, r in series.residuals:
            detector.feed(t, r)
        return detector
