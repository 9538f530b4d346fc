"""Seeded Monte Carlo harness over scenario cells."""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from prometheus_client import Histogram
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from simulation.engine import run_scenario
from utils.errors import NoQualifyingTrials
from validators.schema import ScenarioConfig

logger = logging.getLogger(__name__)

TRIAL_LATENCY = Histogram('binloc_trial_latency_seconds', 'Wall time of one Monte Carlo trial')

TABLE_ONE_GRIDS = [10, 20, 30, 40, 50]


class BenchConfig(BaseModel):
    """Monte Carlo protocol."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    grids: List[int] = Field(default_factory=lambda: list(TABLE_ONE_GRIDS), min_length=1)
    trials: int = Field(100, ge=1)
    k_max: int = Field(1000, ge=1)
    entropy_threshold: float = Field(1.0, gt=0)
    master_seed: int = 0
    controller: bool = True
    baseline: Literal["none", "sir"] = "none"
    envelope: Optional[List[float]] = Field(None, description="True P_T values for the envelope sweep, W")
    assumed_pt: float = Field(5.0, gt=0, description="Assumed P_T for the envelope sweep, W")
    envelope_grid: int = Field(20, ge=1)
    envelope_radius: float = Field(2.5, gt=0)
    jobs: int = Field(1, ge=1)
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)


@dataclass(frozen=True)
class CellSpec:
    """One labelled configuration to run `trials` times."""
    label: str
    scenario: ScenarioConfig
    grid_side: int

    @property
    def fusion(self) -> str:
        return self.scenario.run.fusion


@dataclass(eq=False)
class CellResult:
    """Per-cell error curves and terminal statistics, ordered by trial index."""
    label: str
    grid_side: int
    spacing: float
    ks: np.ndarray
    errors: np.ndarray
    final_entropies: np.ndarray
    fusion: str = "grid"

    @property
    def trials(self) -> int:
        return self.errors.shape[0]

    @property
    def rms(self) -> np.ndarray:
        """e_k = sqrt(mean over trials of ‖s̄_k − s‖²)."""
        return np.sqrt(np.mean(self.errors ** 2, axis=0))

    @property
    def final_errors(self) -> np.ndarray:
        return self.errors[:, -1]

    def rms_at(self, k: int) -> float:
        """RMS error at the last recorded measurement count not exceeding k."""
        idx = int(np.searchsorted(self.ks, k, side="right")) - 1
        return float(self.rms[max(idx, 0)])

    def curve_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": self.ks, "rms_m": self.rms})


@dataclass(eq=False)
class BenchResult:
    config: BenchConfig
    cells: List[CellResult] = field(default_factory=list)

    def cell(self, label: str) -> CellResult:
        for c in self.cells:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def labels(self) -> List[str]:
        return [c.label for c in self.cells]


@dataclass(frozen=True)
class AsymptoticError:
    e_inf: float
    qualify_frac: float
    qualifying: int


def trial_seed(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Per-trial entropy; identical across cells so every cell sees the same sources."""
    return np.random.SeedSequence([master_seed, trial])


def _run_trial(args) -> tuple:
    scenario, master_seed, trial = args
    start = time.perf_counter()
    trace = run_scenario(scenario, trial_seed(master_seed, trial))
    TRIAL_LATENCY.observe(time.perf_counter() - start)
    return trace.ks, trace.errors, trace.final_entropy


def grid_label(side: int, controller: bool = True, fusion: str = "grid") -> str:
    label = f"M{side}x{side}"
    if fusion != "grid":
        label += f"_{fusion}"
    if not controller:
        label += "_static"
    return label


def cell_scenario(cfg: BenchConfig, side: int, controller: Optional[bool] = None, **sections) -> ScenarioConfig:
    controller = cfg.controller if controller is None else controller
    control = {"enabled": controller, **sections.pop("control", {})}
    run = {"k_max": cfg.k_max, **sections.pop("run", {})}
    return cfg.scenario.updated(grid={"side": side}, control=control, run=run, **sections)


def default_cells(cfg: BenchConfig) -> List[CellSpec]:
    """Cells for every side using the scenario's fusion method, plus SIR cells when the baseline is enabled."""
    cells = []
    for side in cfg.grids:
        scenario = cell_scenario(cfg, side)
        cells.append(CellSpec(grid_label(side, cfg.controller, scenario.run.fusion), scenario, side))
        if cfg.baseline == "sir" and scenario.run.fusion != "sir":
            sir = cell_scenario(cfg, side, run={"fusion": "sir"})
            cells.append(CellSpec(grid_label(side, cfg.controller, "sir"), sir, side))
    return cells


def run_cell(cfg: BenchConfig, cell: CellSpec, progress: bool = True) -> CellResult:
    """All trials of one cell; a failing trial aborts the cell."""
    tasks = [(cell.scenario, cfg.master_seed, trial) for trial in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as executor:
            outcomes = list(tqdm(executor.map(_run_trial, tasks), total=len(tasks), desc=cell.label, disable=not progress))
    else:
        outcomes = [_run_trial(t) for t in tqdm(tasks, desc=cell.label, disable=not progress)]
    ks = outcomes[0][0]
    return CellResult(
        label=cell.label,
        grid_side=cell.grid_side,
        spacing=cell.scenario.grid.spacing,
        ks=ks,
        errors=np.vstack([o[1] for o in outcomes]),
        final_entropies=np.array([o[2] for o in outcomes]),
        fusion=cell.fusion,
    )


def monte_carlo(cfg: BenchConfig, cells: Optional[List[CellSpec]] = None, progress: bool = True) -> BenchResult:
    """Run every cell for cfg.trials seeded trials.

    Trial t of every cell draws from SeedSequence([master_seed, t]), so
    equal master seeds give identical results and cells share sources.
    """
    cells = cells if cells is not None else default_cells(cfg)
    result = BenchResult(config=cfg)
    for cell in cells:
        logger.info(f"Running cell {cell.label}: {cfg.trials} trials, k_max = {cell.scenario.run.k_max}")
        result.cells.append(run_cell(cfg, cell, progress))
    return result


def cell_asymptotic_error(cell: CellResult, threshold: float) -> AsymptoticError:
    """RMS terminal error over trials whose terminal entropy is below `threshold` nats.

    Raises:
        NoQualifyingTrials: If no trial gets below the threshold
    """
    qualifying = cell.final_entropies < threshold
    n = int(np.count_nonzero(qualifying))
    if n == 0:
        raise NoQualifyingTrials(f"No trial of {cell.label} reached entropy below {threshold} nats")
    e_inf = float(np.sqrt(np.mean(cell.final_errors[qualifying] ** 2)))
    return AsymptoticError(e_inf=e_inf, qualify_frac=n / cell.trials, qualifying=n)


def asymptotic_error(res: BenchResult, threshold: Optional[float] = None) -> Dict[str, AsymptoticError]:
    """e_∞ and the qualifying fraction for every cell."""
    threshold = res.config.entropy_threshold if threshold is None else threshold
    return {c.label: cell_asymptotic_error(c, threshold) for c in res.cells}


def table_one(res: BenchResult, threshold: Optional[float] = None) -> pd.DataFrame:
    """Rows (M, spacing_m, e_inf_m, qualify_frac) for the cells using the scenario's own fusion method."""
    threshold = res.config.entropy_threshold if threshold is None else threshold
    rows = []
    for cell in res.cells:
        if cell.fusion != res.config.scenario.run.fusion:
            continue
        try:
            stats = cell_asymptotic_error(cell, threshold)
            e_inf, frac = stats.e_inf, stats.qualify_frac
        except NoQualifyingTrials as e:
            logger.warning(str(e))
            e_inf, frac = math.nan, 0.0
        rows.append({"M": cell.grid_side ** 2, "spacing_m": cell.spacing, "e_inf_m": e_inf, "qualify_frac": frac})
    return pd.DataFrame(rows, columns=["M", "spacing_m", "e_inf_m", "qualify_frac"])
