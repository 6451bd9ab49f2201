"""
Long runs towards a steady state.

The residual ||W_n - W_{n-1}||_inf / (dt ||W_n||_inf) is recorded at the output
cadence; the verdict is taken by :class:`SteadyStateDetector`.
"""
import logging
import threading
from pathlib import Path
from typing import Optional, Sequence

from ..config.preset_manager import ExperimentPreset
from ..errors import OutputError
from ..executor import run_simulation
from ..observables import ObservableSeries, SteadyStateDetector
from ..pipeline import SimulationSink
from .type import SteadyVerdict

logger = logging.getLogger(__name__)

# acceptance bound on the relative particle-number drift of a steady run
MASS_DRIFT_LIMIT = 1e-4


def steady_state_run(preset: ExperimentPreset, t_max: Optional[float] = None,
                     threshold: Optional[float] = None, window: Optional[int] = None,
                     sinks: Sequence[SimulationSink] = (),
                     cancellation_event: Optional[threading.Event] = None,
                     show_progress: bool = False) -> tuple[ObservableSeries, SteadyVerdict]:
    """
    Run a preset to ``t_max`` and decide whether it reached a steady state.

    Args:
        preset: experiment preset, usually ex4a, ex4b or ex5
        t_max: end time, default the preset's configured T
        threshold: residual threshold, default the preset's calibrated value
        window: consecutive below-threshold records required
    """
    config = preset.config
    if t_max is not None:
        config = config.with_changes(T=float(t_max))
    threshold = threshold if threshold is not None else preset.steady_threshold
    window = window if window is not None else preset.steady_window

    logger.info(f"稳态实验 {preset.id}: t_max={config.T}, threshold={threshold}, window={window}")
    result = run_simulation(config, sinks, cancellation_event, show_progress)
    series = result.series
    detector = SteadyStateDetector.from_series(series, threshold, window)
    reached, t_steady = detector.verdict()

    first, last = series.records[0], series.records[-1]
    verdict = SteadyVerdict(
        preset=preset.id,
        t_max=config.T,
        threshold=threshold,
        window=window,
        steady_reached=reached,
        t_steady=t_steady,
        expected=preset.steady_expected,
        min_residual=detector.min_residual if series.residuals else float("nan"),
        final_residual=series.residuals[-1][1] if series.residuals else float("nan"),
        mass_drift=series.mass_drift(),
        energy_change=last.E - first.E,
        cancelled=result.cancelled,
    )
    if reached:
        logger.info(f"{preset.id} 在 t={t_steady:.4g} 达到稳态 (residual < {threshold})")
    else:
        logger.info(f"{preset.id} 在 t_max={config.T} 前未达到稳态, 最小残差 {verdict.min_residual:.3e}")
    return series, verdict


def check_verdict(verdict: SteadyVerdict) -> SteadyVerdict:
    failures = []
    if verdict.cancelled:
        failures.append("run was cancelled")
    if not verdict.steady_reached:
        failures.append(f"no steady state by t={verdict.t_max}")
    elif verdict.expected is not None:
        lo, hi = verdict.expected
        if not lo <= verdict.t_steady <= hi:
            failures.append(f"t_steady={verdict.t_steady:.4g} outside [{lo}, {hi}]")
    if verdict.mass_drift > MASS_DRIFT_LIMIT:
        failures.append(f"mass drift {verdict.mass_drift:.3e} exceeds {MASS_DRIFT_LIMIT}")
    return verdict.model_copy(update={"passed": not failures, "failures": failures})


def write_verdict(verdict: SteadyVerdict, out_dir: str | Path) -> Path:
    path = Path(out_dir) / f"steady_{verdict.preset}.json"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(verdict.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        raise OutputError(f"写入稳态结论失败: {e.strerror or e}", str(path)) from e
    return path
