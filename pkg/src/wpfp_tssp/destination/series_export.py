import logging
import os
from pathlib import Path

import pandas as pd

from ..errors import OutputError
from ..grid import WignerField
from ..observables import LocalMoments, ObservableSeries
from ..pipeline import SimulationSink

# 配置日志
logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise OutputError(f"写入 CSV 失败: {e.strerror or e}", str(path)) from e


def emit_series(series: ObservableSeries, path: str | Path) -> Path:
    """
    Write ``t,N,J,E`` to ``path`` and the normalized series to
    ``<stem>_normalized.csv`` next to it.
    """
    path = Path(path)
    _write_csv(series.to_frame(), path)
    if series.records:
        _write_csv(series.normalized(), path.with_name(f"{path.stem}_normalized{path.suffix}"))
    logger.info(f"导出观测量序列 {len(series.records)} 条: {path}")
    return path


def emit_residuals(series: ObservableSeries, path: str | Path) -> Path:
    path = Path(path)
    _write_csv(series.residual_frame(), path)
    return path


class SeriesExporter(SimulationSink):
    """Writes series.csv, series_normalized.csv and residuals.csv when the run ends."""

    def __init__(self, destination_dir: str):
        super().__init__()
        self.destination_dir = destination_dir

        # 确保输出目录存在
        os.makedirs(self.destination_dir, exist_ok=True)

    def on_snapshot(self, step: int, W: WignerField, moments: LocalMoments) -> None:
        pass

    def on_finish(self, W: WignerField, series: ObservableSeries) -> None:
        base = Path(self.destination_dir)
        emit_series(series, base / "series.csv")
        emit_residuals(series, base / "residuals.csv")
