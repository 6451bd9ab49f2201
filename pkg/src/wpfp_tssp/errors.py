"""
Exception hierarchy for the wpfp_tssp package.
"""
from typing import Any, Optional


class WpfpError(Exception):
    """Root of all errors raised by the solver and the experiment harness."""


class ConfigurationError(WpfpError, ValueError):
    """Invalid grid, model parameters, config file or preset.

    Args:
        message: human readable reason
        field: offending field, e.g. ``"grid.M"``
        line: line number in the config file, when known
        path: config file path, when known
    """

    def __init__(self, message: str, *, field: Optional[str] = None,
                 line: Optional[int] = None, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.message = message
        self.field = field
        self.line = line
        self.path = path

    def __str__(self) -> str:
        location = ""
        if self.path is not None:
            location = f"{self.path}:{self.line}: " if self.line is not None else f"{self.path}: "
        elif self.line is not None:
            location = f"line {self.line}: "
        field = f"{self.field}: " if self.field else ""
        return f"{location}{field}{self.message}"


class GridMismatchError(WpfpError, ValueError):
    """Operands live on different grids or have incompatible shapes."""


class NumericError(WpfpError, ArithmeticError):
    """Non-finite data, overflow or a violated numerical invariant."""

    def __init__(self, message: str, diagnostics: Optional[dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self) -> str:
        if not self.diagnostics:
            return super().__str__()
        details = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        return f"{super().__str__()} ({details})"


class OutputError(WpfpError, OSError):
    """Reading or writing a snapshot, series or report failed."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
