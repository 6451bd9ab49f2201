from .series_export import SeriesExporter, emit_residuals, emit_series
from .snapshot_export import SnapshotExporter, emit_moments, emit_snapshot, read_snapshot

__all__ = ['SeriesExporter', 'SnapshotExporter', 'emit_moments', 'emit_residuals', 'emit_series',
           'emit_snapshot', 'read_snapshot']
