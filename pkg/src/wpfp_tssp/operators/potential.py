"""
Potential specifications and the external-potential delta-V table.

    delta V(x, y, t) = (i / eps) * (V(x + y, t) - V(x - y, t)),   y = eps * nu_k / 2
"""
import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, TypeAlias, get_args

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import ConfigurationError, GridMismatchError
from ..grid import GridSpec

logger = logging.getLogger(__name__)

ExternalKind: TypeAlias = Literal["polynomial", "harmonic", "double_well",
                                  "harmonic_plus_sine", "arctan_step"]

# number of coefficients per kind, None = any (>= 1)
_ARITY: dict[str, Optional[int]] = {
    "polynomial": None,
    "harmonic": 2,
    "double_well": 0,
    "harmonic_plus_sine": 1,
    "arctan_step": 1,
}


@dataclass(frozen=True)
class ExternalPotential:
    """
    Closed-form external potential from the whitelist.

        polynomial(c0, c1, ...)   sum_n c_n x^n
        harmonic(c2, c1)          c2 x^2 / 2 + c1 x
        double_well()             (x^2 - 1)^2
        harmonic_plus_sine(A)     x^2 / 2 + x + A sin(x)
        arctan_step(s)            arctan(s x) + pi / 2

    All presets are static; the time argument is accepted and ignored.
    """
    kind: ExternalKind
    coefficients: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise ConfigurationError(f"unknown potential id {self.kind!r}, expected one of "
                                     f"{sorted(_ARITY) + ['self_consistent']}", field="potential.kind")
        arity = _ARITY[self.kind]
        n = len(self.coefficients)
        if (arity is None and n < 1) or (arity is not None and n != arity):
            expected = "at least 1" if arity is None else str(arity)
            raise ConfigurationError(f"{self.kind} takes {expected} coefficients, got {n}",
                                     field="potential.coefficients")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ConfigurationError("coefficients must be finite", field="potential.coefficients")

    def __call__(self, x: np.ndarray | float, t: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        match self.kind:
            case "polynomial":
                return P.polyval(x, self.coefficients)
            case "harmonic":
                c2, c1 = self.coefficients
                return 0.5 * c2 * x * x + c1 * x
            case "double_well":
                return (x * x - 1.0) ** 2
            case "harmonic_plus_sine":
                (amp,) = self.coefficients
                return 0.5 * x * x + x + amp * np.sin(x)
            case "arctan_step":
                (s,) = self.coefficients
                return np.arctan(s * x) + 0.5 * np.pi
        raise AssertionError(self.kind)

    def quadratic_coefficients(self) -> Optional[tuple[float, float]]:
        """(c2, c1) with V = c2 x^2 / 2 + c1 x + const, or None for non-quadratic V."""
        match self.kind:
            case "harmonic":
                c2, c1 = self.coefficients
                return (c2, c1)
            case "polynomial":
                coeffs = P.polytrim(np.asarray(self.coefficients, dtype=float))
                if len(coeffs) > 3:
                    return None
                padded = np.zeros(3)
                padded[:len(coeffs)] = coeffs
                return (2.0 * padded[2], padded[1])
        return None


@dataclass(frozen=True)
class SelfConsistentPotential:
    """V solves the periodic Poisson problem V'' = alpha * rho, alpha = +1 or -1."""
    alpha: int

    def __post_init__(self) -> None:
        if isinstance(self.alpha, bool) or self.alpha not in (1, -1):
            raise ConfigurationError(f"alpha must be +1 or -1, got {self.alpha!r}", field="potential.alpha")


PotentialSpec: TypeAlias = ExternalPotential | SelfConsistentPotential


def make_potential(kind: str, coefficients: tuple[float, ...] = (),
                   alpha: Optional[int] = None) -> PotentialSpec:
    """Build a potential spec from a whitelist id (config files, CLI)."""
    if kind == "self_consistent":
        if coefficients:
            raise ConfigurationError("self_consistent takes no coefficients", field="potential.coefficients")
        if alpha is None:
            raise ConfigurationError("self_consistent requires alpha", field="potential.alpha")
        return SelfConsistentPotential(alpha)
    if alpha is not None:
        raise ConfigurationError(f"alpha is only valid for self_consistent, not {kind}", field="potential.alpha")
    if kind not in get_args(ExternalKind):
        raise ConfigurationError(f"unknown potential id {kind!r}", field="potential.kind")
    return ExternalPotential(kind, tuple(float(c) for c in coefficients))  # type: ignore[arg-type]


@dataclass(frozen=True)
class DeltaVTable:
    """entries[m, k] = delta V(x_m, eps * nu_k / 2, t); column k = 0 is zero."""
    entries: np.ndarray
    time_tag: float = 0.0

    def check_grid(self, grid: GridSpec) -> None:
        if self.entries.shape != grid.shape:
            raise GridMismatchError(f"delta-V table shape {self.entries.shape} does not match grid {grid.shape}")


def build_delta_v_external(potential: PotentialSpec, grid: GridSpec, epsilon: float,
                           t: float = 0.0) -> DeltaVTable:
    """
    Evaluate delta V analytically at the shifted points x_m +- eps nu_k / 2
    (which may leave [a, b]).
    """
    if not isinstance(potential, ExternalPotential):
        raise ConfigurationError("self-consistent potentials need build_delta_v_selfconsistent",
                                 field="potential")
    if not epsilon > 0:
        raise ConfigurationError(f"must be > 0, got {epsilon}", field="physics.epsilon")
    y = 0.5 * epsilon * grid.nu[None, :]
    x = grid.x[:, None]
    entries = (1j / epsilon) * (potential(x + y, t) - potential(x - y, t))
    return DeltaVTable(np.ascontiguousarray(entries), time_tag=t)
