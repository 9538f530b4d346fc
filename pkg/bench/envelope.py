"""Model-mismatch sweep: fuse with an assumed P̂_T while readings follow the true P_T."""
import logging
from typing import List, Sequence

from bench.harness import BenchConfig, BenchResult, CellSpec, cell_scenario, monte_carlo
from detection.registry import FriisSpec
from utils.errors import EnvelopeViolation

logger = logging.getLogger(__name__)


def envelope_label(true_pt: float) -> str:
    return f"PT{true_pt:g}W"


def envelope_cells(cfg: BenchConfig, assumed_pt: float, true_pts: Sequence[float]) -> List[CellSpec]:
    base = cfg.scenario.model if isinstance(cfg.scenario.model, FriisSpec) else FriisSpec()
    cells = []
    for true_pt in true_pts:
        scenario = cell_scenario(
            cfg,
            cfg.envelope_grid,
            model=base.model_copy(update={"p_t": true_pt}),
            envelope=base.model_copy(update={"p_t": assumed_pt}),
            control={"enabled": True, "guidance": "map_estimate", "radius": cfg.envelope_radius},
        )
        cells.append(CellSpec(envelope_label(true_pt), scenario, cfg.envelope_grid))
    return cells


def envelope_sweep(cfg: BenchConfig, assumed_pt: float, true_pts: Sequence[float], progress: bool = True) -> BenchResult:
    """MAP-guided runs at r = cfg.envelope_radius for each true P_T, one cell per value.

    Raises:
        EnvelopeViolation: If the assumed power is below some true power, so
            the assumed detection function would not dominate
    """
    low = [pt for pt in true_pts if pt > assumed_pt]
    if low:
        raise EnvelopeViolation(f"Assumed P_T = {assumed_pt} W is below true values {low}")
    logger.info(f"Envelope sweep: assumed {assumed_pt} W against {list(true_pts)} W")
    return monte_carlo(cfg, envelope_cells(cfg, assumed_pt, true_pts), progress)
