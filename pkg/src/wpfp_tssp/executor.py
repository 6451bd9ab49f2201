import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence

from tqdm import tqdm

from .config.config_models import RunConfig
from .destination import SeriesExporter, SnapshotExporter
from .errors import NumericError
from .grid import WignerField, gaussian_wavepacket
from .observables import (ObservableRecord, ObservableSeries, global_moments, local_moments,
                          potential_samples, steady_state_residual)
from .pipeline import STRANG_SCHEDULE, SimulationSink, build_caches, strang_step

logger = logging.getLogger(__name__)


@dataclass
class SimulationResult:
    field: WignerField
    series: ObservableSeries
    cancelled: bool = False
    steps_done: int = 0
    elapsed: float = 0.0


def _record(W: WignerField, config: RunConfig, series: ObservableSeries, sinks: Sequence[SimulationSink]) -> None:
    params = config.params
    N, J, E = global_moments(W, potential_samples(W, params), params.alpha_tilde)
    series.append(ObservableRecord(W.time, N, J, E))
    for sink in sinks:
        sink.on_record(W.time, W)


def _snapshot(step: int, W: WignerField, config: RunConfig, series: ObservableSeries,
              sinks: Sequence[SimulationSink]) -> None:
    params = config.params
    moments = local_moments(W, potential_samples(W, params), params.alpha_tilde)
    series.snapshots[W.time] = moments
    for sink in sinks:
        sink.on_snapshot(step, W, moments)


def run_simulation(config: RunConfig, sinks: Sequence[SimulationSink] = (),
                   cancellation_event: Optional[threading.Event] = None,
                   show_progress: bool = False,
                   initial: Optional[WignerField] = None) -> SimulationResult:
    """
    运行完整的时间推进

    Args:
        config: run configuration; P = round(T / dt) Strang steps are taken
        sinks: receive observables, snapshots and the final field
        cancellation_event: 用于中断任务的事件对象, checked after every step
        show_progress: tqdm progress bar
        initial: start from this field instead of the configured Gaussian

    Raises:
        NumericError: the field became non-finite, with the step index
    """
    started = time.perf_counter()
    grid, params, dt = config.grid, config.params, config.dt
    P = config.steps
    every = config.output.every
    snapshot_steps = set(config.snapshot_steps())

    W = initial if initial is not None else gaussian_wavepacket(config.ic, params.epsilon, grid, config.renormalize)
    logger.info(f"开始模拟: grid {grid.M}x{grid.N}, dt={dt}, T={config.T}, steps={P}, "
                f"friction={config.friction}")
    logger.debug(f"stages: {[name for name, _ in STRANG_SCHEDULE.step_group()]}")
    caches = build_caches(grid, dt, params, config.friction)

    series = ObservableSeries()
    _record(W, config, series, sinks)
    if 0 in snapshot_steps:
        _snapshot(0, W, config, series, sinks)

    cancelled = False
    n = 0
    for n in tqdm(range(1, P + 1), desc="时间推进", disable=not show_progress, leave=False):
        previous = W
        try:
            W = strang_step(W, dt, params, caches)
        except NumericError as e:
            e.diagnostics.setdefault("step", n)
            e.diagnostics.setdefault("time", previous.time + dt)
            logger.error(f"第 {n} 步出现非有限值，终止模拟: {e}")
            raise
        if n % every == 0 or n == P:
            _record(W, config, series, sinks)
            series.add_residual(W.time, steady_state_residual(previous, W, dt))
        if n in snapshot_steps:
            _snapshot(n, W, config, series, sinks)
        # 检查中断事件
        if cancellation_event and cancellation_event.is_set():
            logger.warning(f"任务已取消: 第 {n}/{P} 步")
            cancelled = True
            break

    for sink in sinks:
        sink.on_finish(W, series)
    elapsed = time.perf_counter() - started
    logger.info(f"模拟结束: t={W.time:.6g}, steps={n}, 用时 {elapsed:.2f}s")
    return SimulationResult(W, series, cancelled, n, elapsed)


class Executor:
    """
    Runs one configuration and writes its outputs under ``out_dir``:

        out_dir
            ├── snapshots   binary fields (and heat-map CSVs)
            └── series.csv, series_normalized.csv, residuals.csv
    """

    def __init__(self, config: RunConfig, out_dir: str) -> None:
        self.config = config
        self.out_dir = out_dir
        self.snapshot_dir = os.path.join(out_dir, 'snapshots')
        os.makedirs(self.out_dir, exist_ok=True)
        os.makedirs(self.snapshot_dir, exist_ok=True)
        self.sinks: List[SimulationSink] = [
            SnapshotExporter(self.snapshot_dir, heatmap=config.output.heatmap),
            SeriesExporter(self.out_dir),
        ]

    def run(self, cancellation_event: Optional[threading.Event] = None,
            show_progress: bool = False) -> SimulationResult:
        return run_simulation(self.config, self.sinks, cancellation_event, show_progress)
