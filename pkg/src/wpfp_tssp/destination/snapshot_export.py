"""
Binary snapshot format:

    WPFP1 M N a b c d t\\n          ASCII header, floats written with repr()
    M*N little-endian float64      row-major, row m holds W(x_m, xi_0..xi_{N-1})
"""
import logging
import os
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd

from ..errors import OutputError
from ..grid import GridSpec, WignerField
from ..observables import LocalMoments
from ..pipeline import SimulationSink

logger = logging.getLogger(__name__)

MAGIC = "WPFP1"
_DTYPE = np.dtype("<f8")


def _header(W: WignerField) -> bytes:
    g = W.grid
    fields = [MAGIC, str(g.M), str(g.N)] + [repr(float(v)) for v in (g.a, g.b, g.c, g.d, W.time)]
    return (" ".join(fields) + "\n").encode("ascii")


def emit_snapshot(W: WignerField, path: str | Path, format: Literal["binary", "heatmap"] = "binary") -> Path:
    """
    Write a field as a binary snapshot or as a heat-map CSV of (x, xi, W) triples.

    Raises:
        OutputError: the file could not be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if format == "binary":
            with open(path, "wb") as f:
                f.write(_header(W))
                f.write(np.ascontiguousarray(W.values, dtype=_DTYPE).tobytes(order="C"))
        elif format == "heatmap":
            g = W.grid
            frame = pd.DataFrame({
                "x": np.repeat(g.x, g.N),
                "xi": np.tile(g.xi, g.M),
                "W": W.values.ravel(),
            })
            frame.to_csv(path, index=False, float_format="%.17g")
        else:
            raise ValueError(f"unknown snapshot format {format!r}")
    except OSError as e:
        raise OutputError(f"写入快照失败: {e.strerror or e}", str(path)) from e
    logger.debug(f"快照 t={W.time:.6g} 写入 {path}")
    return path


def read_snapshot(path: str | Path) -> WignerField:
    """
    Raises:
        OutputError: unreadable file, bad header or truncated payload
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            header = f.readline()
            payload = f.read()
    except OSError as e:
        raise OutputError(f"读取快照失败: {e.strerror or e}", str(path)) from e
    parts = header.decode("ascii", errors="replace").split()
    if len(parts) != 8 or parts[0] != MAGIC:
        raise OutputError(f"not a {MAGIC} snapshot header: {header[:64]!r}", str(path))
    try:
        M, N = int(parts[1]), int(parts[2])
        a, b, c, d, t = (float(v) for v in parts[3:])
    except ValueError as e:
        raise OutputError(f"bad header values: {e}", str(path)) from e
    if len(payload) != M * N * _DTYPE.itemsize:
        raise OutputError(f"payload has {len(payload)} bytes, expected {M * N * _DTYPE.itemsize}", str(path))
    values = np.frombuffer(payload, dtype=_DTYPE).reshape(M, N).astype(np.float64)
    return WignerField(GridSpec(a, b, c, d, M, N), values, time=t)


def emit_moments(W: WignerField, moments: LocalMoments, path: str | Path) -> Path:
    """CSV of local moments with header ``x,rho,j,e``."""
    path = Path(path)
    frame = pd.DataFrame({"x": W.grid.x, "rho": moments.rho, "j": moments.j, "e": moments.e})
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise OutputError(f"写入局部矩失败: {e.strerror or e}", str(path)) from e
    return path


class SnapshotExporter(SimulationSink):
    def __init__(self, snapshot_dir: str, heatmap: bool = False):
        super().__init__()
        self.snapshot_dir = snapshot_dir
        self.heatmap = heatmap
        self.written: list[Path] = []

        # 确保输出目录存在
        os.makedirs(self.snapshot_dir, exist_ok=True)

    def on_snapshot(self, step: int, W: WignerField, moments: LocalMoments) -> None:
        base = Path(self.snapshot_dir)
        self.written.append(emit_snapshot(W, base / f"snapshot_{step:06d}.wpfp"))
        if self.heatmap:
            self.written.append(emit_snapshot(W, base / f"heatmap_{step:06d}.csv", format="heatmap"))
            self.written.append(emit_moments(W, moments, base / f"moments_{step:06d}.csv"))
