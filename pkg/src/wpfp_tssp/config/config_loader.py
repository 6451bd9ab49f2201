"""
INI run configuration loader.

    [grid]       a b c d M N
    [physics]    epsilon Dpp Dqq Dpq gamma allow_indefinite_diffusion
    [initial]    a11 a22 a12 x0 xi0 renormalize
    [potential]  kind coefficients alpha
    [run]        dt T friction
    [output]     snapshots snapshot_times heatmap every      (optional)

Numbers accept the power notation used for grids and steps, e.g. ``2^-8``.
"""
import configparser
import logging
import re
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..errors import ConfigurationError
from ..grid import GaussianIC, build_grid
from ..operators.friction import FrictionVariant
from ..operators.potential import make_potential
from .config_models import OutputOptions, PhysicalParams, RunConfig

logger = logging.getLogger(__name__)

_POWER = re.compile(r"^\s*([+-]?)(\d+(?:\.\d*)?)\s*\^\s*([+-]?\d+)\s*$")


def parse_number(raw: Any) -> Any:
    """'2^-8' -> 0.00390625, '-2^-8' -> -0.00390625; anything else is passed through to pydantic."""
    if isinstance(raw, str):
        m = _POWER.match(raw)
        if m:
            value = float(m.group(2)) ** int(m.group(3))
            return -value if m.group(1) == "-" else value
    return raw


def _split_list(raw: Any) -> Any:
    if isinstance(raw, str):
        return [parse_number(item) for item in raw.replace(";", ",").split(",") if item.strip()]
    return raw


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("*", mode="before")
    @classmethod
    def _power_notation(cls, value: Any) -> Any:
        return parse_number(value)


class GridSection(_Section):
    a: float
    b: float
    c: float
    d: float
    M: int
    N: int


class PhysicsSection(_Section):
    epsilon: float
    Dpp: float
    Dqq: float
    Dpq: float = 0.0
    gamma: float
    allow_indefinite_diffusion: bool = False


class InitialSection(_Section):
    a11: float
    a22: float
    a12: float = 0.0
    x0: float = 0.0
    xi0: float = 0.0
    renormalize: bool = False


class PotentialSection(_Section):
    kind: str
    coefficients: list[float] = []
    alpha: Optional[int] = None

    @field_validator("coefficients", mode="before")
    @classmethod
    def _coefficient_list(cls, value: Any) -> Any:
        return _split_list(value)


class RunSection(_Section):
    dt: float
    T: float
    friction: FrictionVariant = "collocation"


class OutputSection(_Section):
    snapshots: int = 0
    snapshot_times: list[float] = []
    heatmap: bool = False
    every: int = 1

    @field_validator("snapshot_times", mode="before")
    @classmethod
    def _time_list(cls, value: Any) -> Any:
        return _split_list(value)


_SECTIONS: dict[str, type[_Section]] = {
    "grid": GridSection,
    "physics": PhysicsSection,
    "initial": InitialSection,
    "potential": PotentialSection,
    "run": RunSection,
    "output": OutputSection,
}
_REQUIRED = ("grid", "physics", "initial", "potential", "run")


def _line_index(text: str) -> dict[tuple[str, Optional[str]], int]:
    """Line numbers of '[section]' headers and 'key =' entries."""
    index: dict[tuple[str, Optional[str]], int] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            index.setdefault((section, None), lineno)
        elif section is not None:
            key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip()
            index.setdefault((section, key), lineno)
    return index


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """
    解析 INI 配置文本并校验

    Raises:
        ConfigurationError: with the path, line and ``section.key`` of the first problem
    """
    lines = _line_index(text)

    def fail(message: str, section: str, key: Optional[str] = None) -> ConfigurationError:
        line = lines.get((section, key)) or lines.get((section, None))
        return ConfigurationError(message, field=section if key is None else f"{section}.{key}",
                                  line=line, path=source)

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigurationError(f"malformed config: {e}", path=source) from e

    for name in parser.sections():
        if name not in _SECTIONS:
            raise fail(f"unknown section, expected one of {list(_SECTIONS)}", name)
    for name in _REQUIRED:
        if not parser.has_section(name):
            raise ConfigurationError("missing section", field=name, path=source)

    sections: dict[str, Any] = {}
    for name, model in _SECTIONS.items():
        raw = dict(parser.items(name)) if parser.has_section(name) else {}
        try:
            sections[name] = model.model_validate(raw)
        except ValidationError as e:
            err = e.errors()[0]
            key = str(err["loc"][0]) if err["loc"] else None
            message = "unknown key" if err["type"] == "extra_forbidden" else err["msg"]
            raise fail(message, name, key) from e

    # cross-field validation from the domain constructors, located by field name
    try:
        grid_s: GridSection = sections["grid"]
        phys_s: PhysicsSection = sections["physics"]
        init_s: InitialSection = sections["initial"]
        pot_s: PotentialSection = sections["potential"]
        run_s: RunSection = sections["run"]
        out_s: OutputSection = sections["output"]
        grid = build_grid(grid_s.a, grid_s.b, grid_s.c, grid_s.d, grid_s.M, grid_s.N)
        potential = make_potential(pot_s.kind, tuple(pot_s.coefficients), pot_s.alpha)
        params = PhysicalParams(epsilon=phys_s.epsilon, Dpp=phys_s.Dpp, Dqq=phys_s.Dqq, Dpq=phys_s.Dpq,
                                gamma=phys_s.gamma, potential=potential,
                                allow_indefinite_diffusion=phys_s.allow_indefinite_diffusion)
        ic = GaussianIC(a11=init_s.a11, a22=init_s.a22, a12=init_s.a12, x0=init_s.x0, xi0=init_s.xi0)
        ic.normalized()
        output = OutputOptions(snapshots=out_s.snapshots, snapshot_times=tuple(out_s.snapshot_times),
                               heatmap=out_s.heatmap, every=out_s.every)
        config = RunConfig(grid=grid, params=params, ic=ic, dt=run_s.dt, T=run_s.T, output=output,
                           friction=run_s.friction, renormalize=init_s.renormalize)
    except ConfigurationError as e:
        if e.field and e.line is None:
            section, _, key = e.field.partition(".")
            e.line = lines.get((section, key or None)) or lines.get((section, None))
        e.path = source
        raise
    logger.info(f"加载配置 {source}: grid {grid.M}x{grid.N}, dt={config.dt}, T={config.T}")
    return config


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config: {e.strerror}", path=str(path)) from e
    return parse_config(text, source=str(path))
