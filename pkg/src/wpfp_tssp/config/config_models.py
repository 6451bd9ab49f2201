"""
Data models for run configurations of the wpfp_tssp solver.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import get_args

from ..errors import ConfigurationError
from ..grid import GaussianIC, GridSpec
from ..operators.friction import FrictionVariant
from ..operators.potential import PotentialSpec, SelfConsistentPotential

logger = logging.getLogger(__name__)

# |P * dt - T| <= STEP_TOLERANCE * T
STEP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Model coefficients of the WFP / WPFP equation."""
    epsilon: float
    Dpp: float
    Dqq: float
    Dpq: float
    gamma: float
    potential: PotentialSpec
    allow_indefinite_diffusion: bool = False

    def __post_init__(self) -> None:
        for name in ("epsilon", "Dpp", "Dqq", "Dpq", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"must be finite, got {getattr(self, name)}", field=f"physics.{name}")
        if not self.epsilon > 0:
            raise ConfigurationError(f"must be > 0, got {self.epsilon}", field="physics.epsilon")
        if self.gamma < 0:
            raise ConfigurationError(f"must be >= 0, got {self.gamma}", field="physics.gamma")
        if not self.diffusion_is_psd():
            message = (f"diffusion matrix [[{self.Dqq}, {self.Dpq}], [{self.Dpq}, {self.Dpp}]] "
                       f"is not positive semidefinite")
            if not self.allow_indefinite_diffusion:
                raise ConfigurationError(message, field="physics")
            logger.warning(f"{message}，部分扩散因子将大于 1 (allow_indefinite_diffusion)")

    def diffusion_is_psd(self) -> bool:
        return self.Dqq >= 0 and self.Dpp >= 0 and self.Dqq * self.Dpp >= self.Dpq ** 2

    @property
    def has_diffusion(self) -> bool:
        return not (self.Dqq == 0 and self.Dpq == 0 and self.Dpp == 0)

    @property
    def self_consistent(self) -> bool:
        return isinstance(self.potential, SelfConsistentPotential)

    @property
    def alpha_tilde(self) -> float:
        """Weight of V in the energy density: 1 for external, 1/2 for self-consistent."""
        return 0.5 if self.self_consistent else 1.0


@dataclass(frozen=True)
class OutputOptions:
    """
    snapshots: K equally spaced snapshots (0 = none)
    snapshot_times: explicit times, rounded to the nearest step
    heatmap: also write (x, xi, W) and local moment CSVs per snapshot
    every: record observables every n steps
    """
    snapshots: int = 0
    snapshot_times: tuple[float, ...] = ()
    heatmap: bool = False
    every: int = 1

    def __post_init__(self) -> None:
        if self.snapshots < 0:
            raise ConfigurationError(f"must be >= 0, got {self.snapshots}", field="output.snapshots")
        if self.every < 1:
            raise ConfigurationError(f"must be >= 1, got {self.every}", field="output.every")
        if any(not math.isfinite(t) or t < 0 for t in self.snapshot_times):
            raise ConfigurationError(f"times must be finite and >= 0, got {self.snapshot_times}",
                                     field="output.snapshot_times")


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec
    params: PhysicalParams
    ic: GaussianIC
    dt: float
    T: float
    output: OutputOptions = field(default_factory=OutputOptions)
    friction: FrictionVariant = "collocation"
    renormalize: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"must be > 0, got {self.dt}", field="run.dt")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigurationError(f"must be >= 0, got {self.T}", field="run.T")
        if self.friction not in get_args(FrictionVariant):
            raise ConfigurationError(f"unknown friction variant {self.friction!r}", field="run.friction")
        self.steps  # validates T / dt

    @property
    def steps(self) -> int:
        """P = round(T / dt), rejected unless P * dt matches T."""
        P = round(self.T / self.dt)
        if abs(P * self.dt - self.T) > STEP_TOLERANCE * self.T:
            raise ConfigurationError(f"T={self.T} is not an integer multiple of dt={self.dt}", field="run.T")
        return P

    def snapshot_steps(self) -> list[int]:
        """Step indices at which snapshots are emitted, sorted and unique."""
        P = self.steps
        indices: set[int] = set()
        K = self.output.snapshots
        if K == 1:
            indices.add(P)
        elif K > 1:
            indices.update(round(i * P / (K - 1)) for i in range(K))
        for t in self.output.snapshot_times:
            n = round(t / self.dt)
            if n > P:
                logger.warning(f"快照时间 t={t} 超出 T={self.T}，忽略")
                continue
            indices.add(n)
        return sorted(indices)

    def with_changes(self, **changes) -> "RunConfig":
        return replace(self, **changes)
