"""Run configuration: JSON files with nested sections, plus two bundled setups."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .contour import DEFAULT_QUAD_TOL, DEFAULT_TAIL_TOL
from .errors import InvalidParameterError
from .model import ColumnScenario, SoilHydraulics
from .solver import DEFAULT_T_MIN, ContourConfig, PoleStrategy

BUNDLED = ("example1", "example2")


@dataclass(frozen=True)
class GridConfig:
    nx: int = 26
    times_s: tuple = ()


@dataclass(frozen=True)
class Tolerances:
    quad: float = DEFAULT_QUAD_TOL
    tail: float = DEFAULT_TAIL_TOL
    t_min: float = DEFAULT_T_MIN


@dataclass(frozen=True)
class GateConfig:
    max_theta_diff: float = 1e-4
    t_from_s: float = 60.0


@dataclass(frozen=True)
class OracleConfig:
    fd_nx: int = 2001
    fd_dt: float = 0.5
    series_N: int = 2000


@dataclass(frozen=True)
class ConvergenceConfig:
    t_s: float = 2400.0
    Ns: tuple = (10, 50, 250, 1000, 2000)


@dataclass(frozen=True)
class OutputConfig:
    csv: str | None = None
    plot: str | None = None
    plot_format: str = "svg"


@dataclass(frozen=True)
class RunConfig:
    soil: SoilHydraulics
    scenario: ColumnScenario
    contour: ContourConfig = ContourConfig()
    strategy: PoleStrategy = PoleStrategy.AUTO
    grid: GridConfig = GridConfig()
    tol: Tolerances = Tolerances()
    gate: GateConfig = GateConfig()
    oracle: OracleConfig = OracleConfig()
    convergence: ConvergenceConfig = ConvergenceConfig()
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self) -> None:
        times = list(self.grid.times_s)
        if any(b < a for a, b in zip(times, times[1:])):
            raise InvalidParameterError("grid.times_s must be sorted ascending")
        if any(t < 0 or not math.isfinite(t) for t in times):
            raise InvalidParameterError("grid.times_s must be finite and non-negative")
        if self.grid.nx < 2:
            raise InvalidParameterError("grid.nx must be >= 2")
        if self.output.plot_format not in ("svg", "pdf", "eps"):
            raise InvalidParameterError("output.plot_format must be svg, pdf or eps")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["strategy"] = self.strategy.value
        d["grid"]["times_s"] = list(self.grid.times_s)
        d["convergence"]["Ns"] = list(self.convergence.Ns)
        return d


def _section(cls, data: dict | None, name: str):
    data = dict(data or {})
    known = set(cls.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise InvalidParameterError(f"unknown key(s) in {name}: {sorted(unknown)}")
    for key, val in data.items():
        if isinstance(val, list):
            data[key] = tuple(val)
    try:
        return cls(**data)
    except TypeError as exc:
        raise InvalidParameterError(f"bad section {name}: {exc}") from None


def from_dict(data: dict) -> RunConfig:
    """Build a :class:`RunConfig`; missing sections and keys take defaults."""
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise InvalidParameterError(f"unknown top-level key(s): {sorted(unknown)}")
    for required in ("soil", "scenario"):
        if required not in data:
            raise InvalidParameterError(f"missing section: {required}")
    try:
        strategy = PoleStrategy(data.get("strategy", "auto"))
    except ValueError:
        raise InvalidParameterError(f"unknown strategy {data.get('strategy')!r}") from None
    contour = _section(ContourConfig, data.get("contour"), "contour")
    if contour.type not in ("trapezoid", "exclusion"):
        raise InvalidParameterError(f"contour.type must be trapezoid or exclusion, got {contour.type!r}")
    return RunConfig(
        soil=_section(SoilHydraulics, data["soil"], "soil"),
        scenario=_section(ColumnScenario, data["scenario"], "scenario"),
        contour=contour,
        strategy=strategy,
        grid=_section(GridConfig, data.get("grid"), "grid"),
        tol=_section(Tolerances, data.get("tol"), "tol"),
        gate=_section(GateConfig, data.get("gate"), "gate"),
        oracle=_section(OracleConfig, data.get("oracle"), "oracle"),
        convergence=_section(ConvergenceConfig, data.get("convergence"), "convergence"),
        output=_section(OutputConfig, data.get("output"), "output"),
    )


def load(path_or_name: str | Path) -> RunConfig:
    """Load a config file, or one of the bundled names ``example1``/``example2``."""
    name = str(path_or_name)
    if name in BUNDLED and not Path(name).exists():
        text = resources.files("fokas_richards.configs").joinpath(f"{name}.json").read_text()
    else:
        try:
            text = Path(name).read_text()
        except OSError as exc:
            raise InvalidParameterError(f"cannot read config {name!r}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"config {name!r} is not valid JSON: {exc}") from None
    return from_dict(data)


def dump(cfg: RunConfig, path: str | Path) -> None:
    """Write the effective configuration (defaults filled in)."""
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
