from typing import Literal, Optional, TypeAlias

from pydantic import BaseModel

Axis: TypeAlias = Literal["M", "N", "dt"]


class ConvergenceReport(BaseModel):
    preset: str
    axis: Axis
    friction: str
    samples: list[float]
    l2_errors: list[float]
    linf_errors: list[float]
    l2_orders: list[float]
    linf_orders: list[float]
    runtimes: list[float]
    reference: str
    reference_grid: tuple[int, int]
    reference_dt: float
    note: str = ""
    expected_order: Optional[tuple[float, float]] = None
    passed: Optional[bool] = None
    failures: list[str] = []


class SteadyVerdict(BaseModel):
    preset: str
    t_max: float
    threshold: float
    window: int
    steady_reached: bool
    t_steady: Optional[float] = None
    expected: Optional[tuple[float, float]] = None
    min_residual: float
    final_residual: float
    mass_drift: float
    energy_change: float
    cancelled: bool = False
    passed: Optional[bool] = None
    failures: list[str] = []
