"""Scenario configuration schema and the YAML loader."""
import logging
import math
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from detection.registry import FriisSpec, ModelSpec
from estimation.grid import Box, CentreSet, uniform_grid
from simulation.agents import TimingModel
from utils.errors import ConfigError
from validators.quality import ScenarioChecker

logger = logging.getLogger(__name__)

# Four agents evenly spaced through the search region.
DEFAULT_AGENT_POSITIONS = [(-18.75, -18.75), (18.75, -18.75), (18.75, 18.75), (-18.75, 18.75)]


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class RegionSection(_Section):
    """Search region S (where the source may lie), metres."""
    xmin: float = -37.5
    xmax: float = 37.5
    ymin: float = -37.5
    ymax: float = 37.5

    @model_validator(mode="after")
    def _non_degenerate(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("region bounds must satisfy xmin < xmax and ymin < ymax")
        return self

    def box(self) -> Box:
        return Box(self.xmin, self.xmax, self.ymin, self.ymax)


class GridSection(RegionSection):
    """Uniform side × side grid of centres over its own box."""
    side: int = Field(30, ge=1)
    xmin: float = -50.0
    xmax: float = 50.0
    ymin: float = -50.0
    ymax: float = 50.0

    @property
    def size(self) -> int:
        return self.side * self.side

    @property
    def spacing(self) -> float:
        return (self.xmax - self.xmin) / self.side


class AgentsSection(_Section):
    """Initial agent positions; the agent count is their number."""
    positions: List[Tuple[float, float]] = Field(default_factory=lambda: list(DEFAULT_AGENT_POSITIONS), min_length=1)

    @property
    def count(self) -> int:
        return len(self.positions)


class ControlSection(_Section):
    """Formation control law settings."""
    enabled: bool = True
    guidance: Literal["posterior_mean", "map_estimate"] = "posterior_mean"
    radius: Optional[float] = Field(None, gt=0, description="Formation radius r, m; optimised when omitted")
    radius_range: Tuple[float, float] = (5.0, 20.0)
    angles: Optional[List[float]] = None

    @model_validator(mode="after")
    def _range_order(self):
        lo, hi = self.radius_range
        if not 0 < lo <= hi:
            raise ValueError("radius_range must satisfy 0 < r1 <= r2")
        return self


class PriorSection(_Section):
    kind: Literal["uniform", "gaussian"] = "uniform"
    mean: Optional[Tuple[float, float]] = None
    std: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _gaussian_needs_std(self):
        if self.kind == "gaussian" and self.std is None:
            raise ValueError("a gaussian prior requires std")
        return self


class RunSection(_Section):
    """Horizon, optional fixed source, and the fusion method."""
    k_max: int = Field(1000, ge=1, description="Number of measurements to simulate")
    source: Optional[Tuple[float, float]] = None
    fusion: Literal["grid", "sir"] = "grid"
    particles: Optional[int] = Field(None, ge=1, description="SIR particle count; defaults to the grid size")


class ScenarioConfig(_Section):
    """Complete description of one localisation scenario."""
    region: RegionSection = Field(default_factory=RegionSection)
    grid: GridSection = Field(default_factory=GridSection)
    agents: AgentsSection = Field(default_factory=AgentsSection)
    model: ModelSpec = Field(default_factory=FriisSpec)
    envelope: Optional[ModelSpec] = None
    timing: TimingModel = Field(default_factory=TimingModel)
    control: ControlSection = Field(default_factory=ControlSection)
    prior: PriorSection = Field(default_factory=PriorSection)
    run: RunSection = Field(default_factory=RunSection)

    @property
    def n_agents(self) -> int:
        return self.agents.count

    @property
    def epochs(self) -> int:
        """Epochs needed to reach k_max measurements."""
        return int(math.ceil(self.run.k_max / self.n_agents))

    def centres(self) -> CentreSet:
        return uniform_grid(self.grid.side, self.grid.box())

    def updated(self, **sections: Any) -> "ScenarioConfig":
        """Copy with some sections replaced or patched.

        A dict value patches the existing section field by field.
        """
        data = self.model_dump()
        for name, value in sections.items():
            if isinstance(value, dict) and isinstance(data.get(name), dict):
                data[name] = {**data[name], **value}
            elif isinstance(value, BaseModel):
                data[name] = value.model_dump()
            else:
                data[name] = value
        return ScenarioConfig.model_validate(data)


def _locate(node, loc) -> Optional[int]:
    """1-based line of the YAML node at a pydantic error location, if present in the file."""
    line = None
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            match = next(((k, v) for k, v in node.value if k.value == str(key)), None)
            if match is None:
                break
            node = match[1]
            line = match[0].start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
            line = node.start_mark.line + 1
        else:
            break
    return line


def _diagnostics(error: ValidationError, root) -> List[str]:
    out = []
    for err in error.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<root>"
        line = _locate(root, err["loc"]) if root is not None else None
        where = f"line {line}, {path}" if line else path
        out.append(f"{where}: {err['msg']}")
    return out


def load_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    """Parse and validate scenario YAML text.

    Raises:
        ConfigError: With line numbers for syntax errors and field paths
            (plus lines where known) for schema violations
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        line = mark.line + 1 if mark else "?"
        raise ConfigError(f"Cannot parse {source}", [f"line {line}: {e.problem or e}"]) from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Invalid {source}", ["<root>: expected a mapping of sections"])
    try:
        cfg = ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid {source}", _diagnostics(e, root)) from e
    issues = ScenarioChecker.check(cfg)
    if issues:
        raise ConfigError(f"Inconsistent {source}", issues)
    return cfg


def parse_config(path: Union[str, Path, None]) -> ScenarioConfig:
    """Load a scenario file; `None` yields the default scenario."""
    if path is None:
        return load_config_text("", "<defaults>")
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    cfg = load_config_text(path.read_text(), str(path))
    logger.info(f"Loaded scenario from {path}")
    return cfg


def dump_config(cfg: ScenarioConfig) -> str:
    """YAML text that parses back to an identical config."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False)
