"""
Strang splitting: the four split steps as pipeline stages and the seven-stage
schedule

    L1(1/2) L2(1/2) L3(1/2) L4(1) L3(1/2) L2(1/2) L1(1/2)
"""
import abc
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Tuple, TypeAlias

from .config.config_models import PhysicalParams
from .errors import ConfigurationError, GridMismatchError, NumericError
from .grid import GridSpec, WignerField
from .observables import LocalMoments, ObservableSeries
from .operators.friction import FrictionPropagator, apply_friction, build_propagator
from .operators.poisson import build_delta_v_selfconsistent, density, solve_poisson
from .operators.potential import DeltaVTable, ExternalPotential, build_delta_v_external
from .operators.transport import step_convection, step_diffusion, step_nonlocal

logger = logging.getLogger(__name__)

OperatorId: TypeAlias = Literal["L1", "L2", "L3", "L4"]


@dataclass
class StageCaches:
    """
    Per-run precomputed data.

    ``friction`` holds one propagator per distinct friction fraction of the
    schedule; ``delta_v`` is the static external table (None for WPFP).
    """
    grid: GridSpec
    dt: float
    friction: dict[float, FrictionPropagator] = field(default_factory=dict)
    delta_v: Optional[DeltaVTable] = None


class Step(abc.ABC):
    """One split operator advanced by a fraction of the time step."""
    operator: OperatorId

    @abc.abstractmethod
    def run(self, W: WignerField, tau: float, params: PhysicalParams, caches: StageCaches) -> WignerField:
        ...

    def enabled(self, params: PhysicalParams) -> bool:
        return True


StepGroup: TypeAlias = List[Tuple[str, Step]]


class ConvectionStep(Step):
    operator = "L1"

    def run(self, W, tau, params, caches):
        return step_convection(W, tau)


class NonlocalStep(Step):
    """External potentials use the cached table; WPFP rebuilds delta V from the current field."""
    operator = "L2"

    def run(self, W, tau, params, caches):
        if caches.delta_v is not None:
            dv = caches.delta_v
        else:
            pf = solve_poisson(density(W), params.potential.alpha, W.grid, W.time)
            dv = build_delta_v_selfconsistent(pf, W.grid, params.epsilon)
        return step_nonlocal(W, tau, dv)


class DiffusionStep(Step):
    operator = "L3"

    def run(self, W, tau, params, caches):
        return step_diffusion(W, tau, params.Dqq, params.Dpq, params.Dpp)

    def enabled(self, params):
        return params.has_diffusion


class FrictionStep(Step):
    operator = "L4"

    def run(self, W, tau, params, caches):
        prop = caches.friction[round(tau / caches.dt, 12)]
        return apply_friction(W, prop)

    def enabled(self, params):
        return params.gamma != 0


STEPS: dict[OperatorId, Step] = {
    "L1": ConvectionStep(),
    "L2": NonlocalStep(),
    "L3": DiffusionStep(),
    "L4": FrictionStep(),
}


@dataclass(frozen=True)
class SplitSchedule:
    """Ordered (operator, fraction of dt) stages; palindromic, fractions sum to 1 per operator."""
    stages: tuple[tuple[OperatorId, float], ...]

    def __post_init__(self) -> None:
        if tuple(reversed(self.stages)) != self.stages:
            raise ConfigurationError(f"schedule is not palindromic: {self.stages}", field="schedule")
        totals: Counter[str] = Counter()
        for op, fraction in self.stages:
            totals[op] += fraction
        bad = {op: s for op, s in totals.items() if abs(s - 1.0) > 1e-15}
        if bad or set(totals) != set(STEPS):
            raise ConfigurationError(f"every operator needs fractions summing to 1, got {dict(totals)}",
                                     field="schedule")

    def friction_fractions(self) -> set[float]:
        return {fraction for op, fraction in self.stages if op == "L4"}

    def step_group(self) -> StepGroup:
        return [(f"{op}({fraction:g})", STEPS[op]) for op, fraction in self.stages]


STRANG_SCHEDULE = SplitSchedule((("L1", 0.5), ("L2", 0.5), ("L3", 0.5), ("L4", 1.0),
                                 ("L3", 0.5), ("L2", 0.5), ("L1", 0.5)))


def build_caches(grid: GridSpec, dt: float, params: PhysicalParams, friction: str = "collocation",
                 schedule: SplitSchedule = STRANG_SCHEDULE) -> StageCaches:
    caches = StageCaches(grid=grid, dt=dt)
    if params.gamma != 0:
        for fraction in schedule.friction_fractions():
            caches.friction[round(fraction, 12)] = build_propagator(grid, params.gamma, fraction * dt, friction)
    if isinstance(params.potential, ExternalPotential):
        caches.delta_v = build_delta_v_external(params.potential, grid, params.epsilon)
    return caches


def strang_step(W: WignerField, dt: float, params: PhysicalParams, caches: StageCaches,
                schedule: SplitSchedule = STRANG_SCHEDULE) -> WignerField:
    """
    Advance W by one step of size dt.

    A negative dt runs the convection and nonlocal phases backwards (used for
    reversibility checks) and is rejected when friction is on; stages that are
    the identity for ``params`` are skipped.
    """
    if caches.grid != W.grid:
        raise GridMismatchError(f"stage caches built for {caches.grid}, field has {W.grid}")
    if params.gamma != 0 and dt != caches.dt:
        raise ConfigurationError(f"friction propagators built for dt={caches.dt}, step uses {dt}", field="run.dt")
    for op, fraction in schedule.stages:
        step = STEPS[op]
        if step.enabled(params):
            try:
                W = step.run(W, fraction * dt, params, caches)
            except NumericError as e:
                e.diagnostics.setdefault("stage", f"{op}({fraction:g})")
                raise
    return W.with_values(W.values, time=W.time + dt)


class SimulationSink(abc.ABC):
    """Receives observables and snapshots from the time loop."""

    def on_record(self, t: float, W: WignerField) -> None:
        pass

    @abc.abstractmethod
    def on_snapshot(self, step: int, W: WignerField, moments: LocalMoments) -> None:
        ...

    def on_finish(self, W: WignerField, series: ObservableSeries) -> None:
        pass
