"""
Scenario and application configuration models
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigError
from ..largeangle.models import OptimizerSettings
from ..model.models import CraneParams, DynamicsModel, LoadState, TransportTask
from ..sta.models import CoefficientBasis


class ScenarioCommand(str, Enum):
    DESIGN = "design"
    SIMULATE = "simulate"
    POWER = "power"
    CONSUMPTION = "consumption"
    ENERGY_MAP = "energy-map"
    OPTIMAL = "optimal"
    BOUNDS = "bounds"
    EXCITATION_SCAN = "excitation-scan"
    OPTIMIZE_ANGLES = "optimize-angles"


class ProtocolChoice(str, Enum):
    STA = "sta"
    OCT = "oct"


# axes each subcommand reads from `sweep`
SWEEP_AXES: Dict[ScenarioCommand, Tuple[str, ...]] = {
    ScenarioCommand.ENERGY_MAP: ("M", "gamma"),
    ScenarioCommand.EXCITATION_SCAN: ("theta_i_deg",),
    ScenarioCommand.OPTIMIZE_ANGLES: ("theta_i_deg",),
}
SWEEPABLE = ("M", "gamma", "theta_i_deg")


class SweepAxis(BaseModel):
    """Uniform grid over one scenario parameter"""
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., description="Parameter swept")
    min: float
    max: float
    count: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check(self) -> "SweepAxis":
        if not (np.isfinite(self.min) and np.isfinite(self.max)):
            raise ValueError(f"sweep '{self.name}': bounds must be finite")
        if self.name not in SWEEPABLE:
            raise ValueError(f"cannot sweep '{self.name}'; choose one of {', '.join(SWEEPABLE)}")
        if self.max < self.min:
            raise ValueError(f"sweep '{self.name}': max < min")
        if self.name in ("M", "gamma") and self.min < 0:
            raise ValueError(f"sweep '{self.name}': values must be >= 0")
        if self.name == "theta_i_deg" and not (-90 < self.min and self.max < 90):
            raise ValueError("sweep 'theta_i_deg': values must lie strictly between -90 and 90")
        return self

    @property
    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.min, self.max, self.count)]


class ScenarioConfig(BaseModel):
    """
    Flat scenario file: crane, task, initial load state and run options

    SI units throughout; angles carry a _deg suffix.
    """
    model_config = ConfigDict(extra="forbid")

    command: Optional[ScenarioCommand] = Field(default=None, description="Default subcommand")

    # crane
    m: float = Field(..., gt=0)
    M: float = Field(default=0.0, ge=0)
    l: float = Field(..., gt=0)
    gamma: float = Field(default=0.0, ge=0)
    g: float = Field(default=9.8, gt=0)

    # task
    d: float
    t_f: float = Field(..., gt=0)

    # initial load state
    q0: float = 0.0
    qdot0: float = 0.0
    theta0_deg: Optional[float] = Field(default=None, gt=-90, lt=90)
    thetadot0_deg: float = 0.0

    eta: float = 1.0
    model: DynamicsModel = DynamicsModel.HARMONIC
    protocol: ProtocolChoice = ProtocolChoice.STA
    free_values: List[float] = Field(default_factory=list)
    basis: CoefficientBasis = CoefficientBasis.SCALED
    steps: Optional[int] = Field(default=None, gt=0)
    samples: int = Field(default=1001, ge=2, description="Samples for design/optimal output")
    compare_harmonic: bool = False

    sweep: List[SweepAxis] = Field(default_factory=list)
    theta_targets_deg: List[float] = Field(default_factory=list)
    init_scale: Optional[float] = Field(default=None, gt=0)
    workers: Optional[int] = None

    @model_validator(mode="after")
    def _check_initial_state(self) -> "ScenarioConfig":
        if self.theta0_deg is not None and (self.q0 != 0.0 or self.qdot0 != 0.0):
            raise ValueError("give either theta0_deg or q0/qdot0, not both")
        names = [axis.name for axis in self.sweep]
        if len(set(names)) != len(names):
            raise ValueError("sweep axes must be distinct")
        return self

    @property
    def params(self) -> CraneParams:
        return CraneParams(m=self.m, M=self.M, l=self.l, gamma=self.gamma, g=self.g)

    @property
    def task(self) -> TransportTask:
        return TransportTask(d=self.d, t_f=self.t_f)

    @property
    def initial_state(self) -> LoadState:
        if self.theta0_deg is not None:
            return LoadState.from_angle(
                float(np.radians(self.theta0_deg)), float(np.radians(self.thetadot0_deg)), self.l
            )
        return LoadState.from_deviation(self.q0, self.qdot0, self.l)

    def axis(self, name: str) -> Optional[SweepAxis]:
        return next((a for a in self.sweep if a.name == name), None)

    def check_sweep(self, command: ScenarioCommand, line: Optional[int] = None) -> None:
        """Reject sweep axes the subcommand would ignore"""
        used = SWEEP_AXES.get(command, ())
        unused = [axis.name for axis in self.sweep if axis.name not in used]
        if unused:
            raise ConfigError(
                f"'{command.value}' does not sweep {', '.join(unused)}", key="sweep", line=line
            )


class IntegratorSettings(BaseModel):
    default_steps: int = Field(default=20000, ge=1000)


class SweepSettings(BaseModel):
    parallel_workers: int = Field(default=1, description="-1 for one per core")


class OutputSettings(BaseModel):
    dir: str = "output"
    float_format: str = "%.12g"


class ChartSettings(BaseModel):
    dpi: int = Field(default=150, gt=0)
    figure_size: Tuple[float, float] = (10.0, 6.0)


class LoggingSettings(BaseModel):
    level: str = "INFO"
    format: str = (
        "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
        "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    )


class AppSettings(BaseModel):
    """Application defaults from config/config.yaml"""
    integrator: IntegratorSettings = Field(default_factory=IntegratorSettings)
    optimizer: OptimizerSettings = Field(default_factory=OptimizerSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    charts: ChartSettings = Field(default_factory=ChartSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "AppSettings":
        try:
            return cls.model_validate(data or {})
        except ValidationError as e:
            err = e.errors()[0]
            key = ".".join(str(part) for part in err["loc"])
            raise ConfigError(err["msg"], key=key) from e


def _key_line(text: str, key: str) -> Optional[int]:
    """1-based line of a top-level key in a flat YAML file"""
    for number, line in enumerate(text.splitlines(), start=1):
        if line.split("#", 1)[0].strip().startswith(f"{key}:"):
            return number
    return None


def parse_scenario(text: str) -> ScenarioConfig:
    """
    Parse and validate scenario text

    Raises:
        ConfigError: YAML syntax errors (with line) or invalid/unknown keys (with key and line)
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"YAML syntax error: {problem}", line=line) from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a mapping of key: value lines")

    try:
        scenario = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        loc = err["loc"]
        key = str(loc[0]) if loc else None
        message = "unknown key" if err["type"] == "extra_forbidden" else err["msg"]
        raise ConfigError(
            message, key=key, line=_key_line(text, key) if key else None
        ) from e

    if scenario.command is not None:
        scenario.check_sweep(scenario.command, _key_line(text, "sweep"))
    return scenario


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Read a scenario file"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read scenario {path}: {e}") from e
    return parse_scenario(text)
