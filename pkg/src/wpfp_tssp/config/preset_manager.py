"""
Preset manager for the wpfp_tssp project.
Provides the catalogue of reproducible experiments (convergence studies and
steady-state runs) and resolves a preset id or an INI path to a preset.
"""
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Literal, Optional, TypeAlias, TypedDict

from ..errors import ConfigurationError
from ..grid import GaussianIC, build_grid
from ..operators.potential import ExternalPotential, SelfConsistentPotential
from .config_loader import load_config
from .config_models import OutputOptions, PhysicalParams, RunConfig

logger = logging.getLogger(__name__)

ReferenceStrategy: TypeAlias = Literal["analytic-oracle", "fine-grid-self-reference"]

DEFAULT_STEADY_THRESHOLD = 1e-3
DEFAULT_STEADY_WINDOW = 16


class PresetInfo(TypedDict):
    id: str           # Preset's unique identifier
    description: str  # Preset's description
    reference: str    # Reference strategy for convergence studies
    steady: bool      # Whether the preset is a steady-state experiment


@dataclass(frozen=True)
class ExperimentPreset:
    """
    A reproducible experiment.

    Attributes:
        id: preset identifier, e.g. ``"ex1"``
        description: one-line description
        config: full run configuration (T is the convergence end time, or
            ``t_max`` for steady-state presets)
        reference: how convergence errors are measured
        expected_order: accepted range of fitted temporal orders
        reference_grid: (M, N) of the fine self-reference grid
        reference_dt: time step of the reference run
        steady_threshold: residual threshold of the steady-state verdict
        steady_window: consecutive below-threshold records required
        steady_expected: time interval in which the steady verdict is expected
    """
    id: str
    description: str
    config: RunConfig
    reference: ReferenceStrategy = "fine-grid-self-reference"
    expected_order: tuple[float, float] = (1.8, 2.2)
    reference_grid: Optional[tuple[int, int]] = None
    reference_dt: float = 2.0 ** -10
    steady_threshold: float = DEFAULT_STEADY_THRESHOLD
    steady_window: int = DEFAULT_STEADY_WINDOW
    steady_expected: Optional[tuple[float, float]] = None

    @property
    def is_steady(self) -> bool:
        return self.steady_expected is not None

    def with_config(self, config: RunConfig) -> "ExperimentPreset":
        return replace(self, config=config)


def _gaussian_wfp(potential, a: float, b: float, T: float, n: int = 2 ** 7) -> RunConfig:
    """Shared setup of ex1-ex3: eps=0.1, Dpp=Dqq=0.2, Dpq=0.05, gamma=1, x0=0.1, xi0=-0.2."""
    return RunConfig(
        grid=build_grid(a, b, a, b, n, n),
        params=PhysicalParams(epsilon=0.1, Dpp=0.2, Dqq=0.2, Dpq=0.05, gamma=1.0, potential=potential),
        ic=GaussianIC(a11=-1.0, a22=-1.0, a12=0.0, x0=0.1, xi0=-0.2),
        dt=2.0 ** -8,
        T=T,
    )


def _steady_wfp(potential, t_max: float) -> RunConfig:
    return RunConfig(
        grid=build_grid(-4.0, 4.0, -4.0, 4.0, 2 ** 7, 2 ** 7),
        params=PhysicalParams(epsilon=0.1, Dpp=0.1, Dqq=0.1, Dpq=0.0, gamma=1.0, potential=potential),
        ic=GaussianIC(a11=-1.0, a22=-1.0, a12=0.0, x0=0.1, xi0=-0.2),
        dt=2.0 ** -8,
        T=t_max,
        output=OutputOptions(snapshot_times=tuple(float(t) for t in range(0, int(t_max) + 1, 2)), every=16),
    )


def _builtin_presets() -> dict[str, ExperimentPreset]:
    presets = [
        ExperimentPreset(
            id="ex1",
            description="WFP, harmonic V = x^2/2 + x, fine-step and fine-grid reference, T = 0.5",
            config=_gaussian_wfp(ExternalPotential("harmonic", (1.0, 1.0)), -2.0, 2.0, 0.5),
            # W is ~1e-3 at |x| = 2 by T = 0.5; the whole-space oracle is no reference on this domain
            reference_grid=(2 ** 8, 2 ** 8),
        ),
        ExperimentPreset(
            id="ex1w",
            description="WFP, harmonic V = x^2/2 + x on [-4, 4]^2, analytic moment reference, T = 0.5",
            config=_gaussian_wfp(ExternalPotential("harmonic", (1.0, 1.0)), -4.0, 4.0, 0.5, n=2 ** 8),
            reference="analytic-oracle",
        ),
        ExperimentPreset(
            id="ex2",
            description="WFP, double well V = (x^2 - 1)^2, fine-grid reference, T = 0.5",
            config=_gaussian_wfp(ExternalPotential("double_well"), -2.0, 2.0, 0.5),
            reference_grid=(2 ** 8, 2 ** 8),
        ),
        ExperimentPreset(
            id="ex3",
            description="WPFP, self-consistent alpha = -1 on [-4, 4]^2, fine-grid reference, T = 0.25",
            config=_gaussian_wfp(SelfConsistentPotential(-1), -4.0, 4.0, 0.25),
            reference_grid=(2 ** 8, 2 ** 8),
        ),
        ExperimentPreset(
            id="ex4a",
            description="WFP steady state, near-harmonic V = x^2/2 + x + 0.1 sin x",
            config=_steady_wfp(ExternalPotential("harmonic_plus_sine", (0.1,)), 10.0),
            steady_expected=(6.0, 10.0),
        ),
        ExperimentPreset(
            id="ex4b",
            description="WFP steady state, far-from-harmonic V = arctan(10x) + pi/2",
            config=_steady_wfp(ExternalPotential("arctan_step", (10.0,)), 8.0),
            steady_expected=(3.0, 6.0),
        ),
        ExperimentPreset(
            id="ex5",
            description="WPFP steady state, alpha = -1 on [-20, 20]^2, eps = 1",
            config=RunConfig(
                grid=build_grid(-20.0, 20.0, -20.0, 20.0, 2 ** 7, 2 ** 7),
                params=PhysicalParams(epsilon=1.0, Dpp=0.3, Dqq=0.3, Dpq=0.0, gamma=1.0,
                                      potential=SelfConsistentPotential(-1)),
                ic=GaussianIC(a11=-1.0, a22=-1.0, a12=0.0, x0=0.1, xi0=0.1),
                dt=2.0 ** -8,
                T=8.0,
                output=OutputOptions(snapshot_times=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0), every=16),
            ),
            steady_expected=(3.0, 6.0),
        ),
    ]
    return {p.id: p for p in presets}


class PresetManager:
    """
    Manages the experiment presets of the wpfp_tssp project.
    """

    def __init__(self, presets: Optional[dict[str, ExperimentPreset]] = None):
        """
        Initialize the PresetManager instance.

        Args:
            presets: preset catalogue. If None, uses the built-in presets.
        """
        self._presets = presets if presets is not None else _builtin_presets()

    def get_available_presets(self) -> List[PresetInfo]:
        """
        Get all available presets.

        Returns:
            List of PresetInfo objects
        """
        return [
            {
                'id': p.id,
                'description': p.description,
                'reference': p.reference,
                'steady': p.is_steady,
            }
            for p in self._presets.values()
        ]

    def get_preset(self, preset_id: str) -> ExperimentPreset:
        """
        Raises:
            ConfigurationError: unknown preset id
        """
        try:
            return self._presets[preset_id]
        except KeyError:
            raise ConfigurationError(f"unknown preset {preset_id!r}, available: {list(self._presets)}",
                                     field="preset") from None

    def resolve(self, preset_or_path: str) -> ExperimentPreset:
        """
        Resolve a preset id or an INI file path.

        A config file becomes an ad-hoc preset with fine-grid self-reference
        on a grid twice as fine as the configured one.
        """
        if preset_or_path in self._presets:
            return self._presets[preset_or_path]
        path = Path(preset_or_path)
        if not path.suffix and not path.exists():
            return self.get_preset(preset_or_path)
        config = load_config(path)
        logger.info(f"使用配置文件 {path} 作为实验预设")
        return ExperimentPreset(
            id=path.stem,
            description=f"config file {path}",
            config=config,
            reference_grid=(2 * config.grid.M, 2 * config.grid.N),
            reference_dt=config.dt / 4,
        )


# Global instance for easy access
preset_manager = PresetManager()
