"""
Convergence studies along one refinement axis (M, N or dt).

Errors at the final time are measured against the analytic moment reference
(quadratic potentials) or against a run of the same solver on a strictly finer
discretization. Spatial samples are compared with the fine reference at the
shared nodes, so every reference size must be an integer multiple of the
sample size.
"""
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .. import settings
from ..config.config_models import OutputOptions, RunConfig
from ..config.preset_manager import ExperimentPreset
from ..errors import ConfigurationError, OutputError
from ..executor import run_simulation
from ..grid import GridSpec, WignerField, build_grid, error_norms
from ..oracle import reference_field
from .type import Axis, ConvergenceReport

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES: dict[str, list[float]] = {
    "dt": [2.0 ** -k for k in range(4, 9)],
    "M": [16, 32, 64],
    "N": [16, 32, 64],
}

# spatial axes pass when the finest error is tiny or the error dropped by this factor
SPATIAL_FLOOR = 1e-8
SPATIAL_RATIO = 1e3
# errors below this are treated as converged when checking monotonicity
ERROR_FLOOR = 1e-12

# observables recorded at the final step only
FINAL_ONLY = OutputOptions(every=2 ** 31)


def fitted_orders(steps: Sequence[float], errors: Sequence[float]) -> list[float]:
    """log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for each adjacent pair."""
    orders = []
    for (h0, e0), (h1, e1) in zip(zip(steps, errors), zip(steps[1:], errors[1:])):
        if e0 > 0 and e1 > 0:
            orders.append(math.log(e0 / e1) / math.log(h0 / h1))
        else:
            orders.append(math.inf)
    return orders


def subsample(W: WignerField, grid: GridSpec) -> WignerField:
    """Restrict a fine-grid field to the nodes of a coarser grid on the same domain."""
    fine = W.grid
    if (fine.a, fine.b, fine.c, fine.d) != (grid.a, grid.b, grid.c, grid.d):
        raise ConfigurationError("reference and sample grids cover different domains", field="grid")
    if fine.M % grid.M or fine.N % grid.N:
        raise ConfigurationError(f"reference grid {fine.M}x{fine.N} is not an integer refinement of "
                                 f"{grid.M}x{grid.N}", field="grid")
    rx, ry = fine.M // grid.M, fine.N // grid.N
    return WignerField(grid, W.values[::rx, ::ry], time=W.time)


def _sample_config(preset: ExperimentPreset, axis: Axis, value: float) -> RunConfig:
    config = preset.config
    g = config.grid
    match axis:
        case "dt":
            return config.with_changes(dt=float(value), output=FINAL_ONLY)
        case "M":
            return config.with_changes(grid=build_grid(g.a, g.b, g.c, g.d, int(value), g.N),
                                       dt=preset.reference_dt, output=FINAL_ONLY)
        case "N":
            return config.with_changes(grid=build_grid(g.a, g.b, g.c, g.d, g.M, int(value)),
                                       dt=preset.reference_dt, output=FINAL_ONLY)
    raise ConfigurationError(f"unknown axis {axis!r}", field="axis")


def _reference_grid(preset: ExperimentPreset, axis: Axis) -> GridSpec:
    g = preset.config.grid
    if axis == "dt" or preset.reference == "analytic-oracle":
        return g
    if preset.reference_grid is None:
        raise ConfigurationError(f"preset {preset.id} has no reference grid", field="reference_grid")
    M, N = preset.reference_grid
    return build_grid(g.a, g.b, g.c, g.d, M, N)


def _check_reference(preset: ExperimentPreset, axis: Axis, samples: Sequence[float], ref_grid: GridSpec) -> None:
    if preset.reference == "analytic-oracle" and axis != "dt":
        return
    if axis == "dt":
        if preset.reference == "analytic-oracle":
            return
        if not all(preset.reference_dt < s for s in samples):
            raise ConfigurationError(f"reference dt {preset.reference_dt} must be strictly finer than every "
                                     f"sample {list(samples)}", field="reference_dt")
    elif axis == "M":
        if not (all(ref_grid.M > s for s in samples) and ref_grid.N >= preset.config.grid.N):
            raise ConfigurationError(f"reference grid {ref_grid.M}x{ref_grid.N} is not finer than samples "
                                     f"{list(samples)}", field="reference_grid")
    else:
        if not (all(ref_grid.N > s for s in samples) and ref_grid.M >= preset.config.grid.M):
            raise ConfigurationError(f"reference grid {ref_grid.M}x{ref_grid.N} is not finer than samples "
                                     f"{list(samples)}", field="reference_grid")


def _mesh_sizes(preset: ExperimentPreset, axis: Axis, samples: Sequence[float]) -> list[float]:
    g = preset.config.grid
    match axis:
        case "dt":
            return [float(s) for s in samples]
        case "M":
            return [(g.b - g.a) / s for s in samples]
        case _:
            return [(g.d - g.c) / s for s in samples]


def convergence_study(preset: ExperimentPreset, axis: Axis, samples: Optional[Sequence[float]] = None,
                      friction: Optional[str] = None, workers: Optional[int] = None,
                      show_progress: bool = False) -> ConvergenceReport:
    """
    Run every sample, measure the final-time error against the reference and
    fit the order of each adjacent pair.

    Samples are ordered from coarse to fine and run concurrently; the report
    keeps the given order.

    Raises:
        ConfigurationError: unknown axis, or a reference that is not finer than the samples
    """
    if axis not in DEFAULT_SAMPLES:
        raise ConfigurationError(f"unknown axis {axis!r}, expected M, N or dt", field="axis")
    samples = list(samples) if samples else list(DEFAULT_SAMPLES[axis])
    if len(samples) < 2:
        raise ConfigurationError("need at least two samples", field="samples")
    if friction is not None:
        preset = preset.with_config(preset.config.with_changes(friction=friction))
    ref_grid = _reference_grid(preset, axis)
    _check_reference(preset, axis, samples, ref_grid)
    configs = [_sample_config(preset, axis, s) for s in samples]

    logger.info(f"收敛性测试 {preset.id}: axis={axis}, samples={samples}, reference={preset.reference}")
    workers = workers or min(settings.thread_count(), len(configs) + 1)
    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_simulation, c) for c in configs]
        ref_future = None
        if preset.reference != "analytic-oracle":
            ref_dt = preset.reference_dt
            ref_config = preset.config.with_changes(grid=ref_grid, dt=ref_dt, output=FINAL_ONLY)
            ref_future = pool.submit(run_simulation, ref_config, (), None, show_progress)
        results = [f.result() for f in futures]
        ref_field = ref_future.result().field if ref_future is not None else None

    l2_errors, linf_errors = [], []
    for config, result in zip(configs, results):
        if ref_field is None:
            reference = reference_field(config)
        elif axis == "dt":
            reference = ref_field
        else:
            reference = subsample(ref_field, config.grid)
        l2, linf = error_norms(result.field, reference)
        l2_errors.append(l2)
        linf_errors.append(linf)
        logger.info(f"{axis}={config.dt if axis == 'dt' else (config.grid.M if axis == 'M' else config.grid.N)}: "
                    f"L2={l2:.3e}, Linf={linf:.3e}, {result.elapsed:.2f}s")

    for name, errs in (("L2", l2_errors), ("Linf", linf_errors)):
        for e0, e1 in zip(errs, errs[1:]):
            if e1 > e0 and e1 > ERROR_FLOOR:
                logger.warning(f"{name} 误差未单调下降: {errs}")
                break

    h = _mesh_sizes(preset, axis, samples)
    report = ConvergenceReport(
        preset=preset.id,
        axis=axis,
        friction=preset.config.friction,
        samples=[float(s) for s in samples],
        l2_errors=l2_errors,
        linf_errors=linf_errors,
        l2_orders=fitted_orders(h, l2_errors),
        linf_orders=fitted_orders(h, linf_errors),
        runtimes=[r.elapsed for r in results],
        reference=preset.reference,
        reference_grid=(ref_grid.M, ref_grid.N),
        reference_dt=preset.reference_dt,
        note=_scaling_note(preset, axis, ref_grid),
        expected_order=preset.expected_order if axis == "dt" else None,
    )
    logger.info(f"收敛性测试完成, 用时 {time.perf_counter() - started:.2f}s, "
                f"orders L2={np.round(report.l2_orders, 3).tolist()}")
    return report


def _scaling_note(preset: ExperimentPreset, axis: Axis, ref_grid: GridSpec) -> str:
    if preset.reference == "analytic-oracle":
        where = "analytic moment reference"
    else:
        where = f"self-reference on {ref_grid.M}x{ref_grid.N}, dt={preset.reference_dt:g}"
    if axis == "dt":
        fixed = f"grid {preset.config.grid.M}x{preset.config.grid.N}"
    else:
        fixed = f"spatial samples at dt={preset.reference_dt:g}"
    return f"desk scale: {where}; {fixed}"


def check_report(report: ConvergenceReport) -> ConvergenceReport:
    """Evaluate the acceptance thresholds and fill ``passed`` and ``failures``."""
    failures = []
    if report.axis == "dt":
        lo, hi = report.expected_order or (1.8, 2.2)
        for name, orders in (("L2", report.l2_orders), ("Linf", report.linf_orders)):
            bad = [o for o in orders if not lo <= o <= hi]
            if bad:
                failures.append(f"{name} temporal orders {bad} outside [{lo}, {hi}]")
    else:
        for name, errs in (("L2", report.l2_errors), ("Linf", report.linf_errors)):
            finest, coarsest = errs[-1], errs[0]
            if not (finest <= SPATIAL_FLOOR or coarsest >= SPATIAL_RATIO * finest):
                failures.append(f"{name} spatial decay {coarsest:.3e} -> {finest:.3e} is not spectral")
    return report.model_copy(update={"passed": not failures, "failures": failures})


def write_report(report: ConvergenceReport, out_dir: str | Path) -> Path:
    """JSON report plus a CSV table of the samples."""
    out_dir = Path(out_dir)
    stem = f"convergence_{report.preset}_{report.axis}"
    json_path = out_dir / f"{stem}.json"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        pad = [math.nan]
        pd.DataFrame({
            report.axis: report.samples,
            "l2_error": report.l2_errors,
            "linf_error": report.linf_errors,
            "l2_order": pad + report.l2_orders,
            "linf_order": pad + report.linf_orders,
            "runtime": report.runtimes,
        }).to_csv(out_dir / f"{stem}.csv", index=False, float_format="%.17g")
    except OSError as e:
        raise OutputError(f"写入收敛报告失败: {e.strerror or e}", str(json_path)) from e
    return json_path
