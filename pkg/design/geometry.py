"""D-optimal measurement geometry: bearings and radius about an estimated source."""
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from design.fisher import angle_condition_residual, radius_objective
from detection.base_model import as_points
from detection.range_model import RangeProfile
from utils.errors import DomainError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2

RADIUS_GRID_POINTS = 1000
RADIUS_TOL = 1e-4
DEFAULT_RADIUS_RANGE = (5.0, 20.0)


class GeometrySpec(BaseModel):
    """Equidistant formation: agents at anchor + r (cos θ_k, sin θ_k)."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    radius: float = Field(..., gt=0)
    angles: List[float] = Field(..., min_length=1)
    anchor: Tuple[float, float] = (0.0, 0.0)

    @property
    def n_agents(self) -> int:
        return len(self.angles)

    def offsets(self) -> np.ndarray:
        theta = np.asarray(self.angles, dtype=float)
        return self.radius * np.column_stack([np.cos(theta), np.sin(theta)])

    def positions(self) -> np.ndarray:
        return np.asarray(self.anchor, dtype=float) + self.offsets()

    def residual(self) -> Tuple[float, float]:
        return angle_condition_residual(self.angles)


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = RADIUS_TOL) -> float:
    """Golden-section search for a maximiser of a unimodal f on [a, b].

    Returns the midpoint of the final bracket, whose width is at most `tol`.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return 0.5 * (a + b)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(n - 1):
        if yc >= yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
    if yc >= yd:
        return 0.5 * (a + d)
    return 0.5 * (c + b)


def optimal_radius(profile: RangeProfile, r1: float, r2: float) -> float:
    """Maximiser of ρ′²/(ρ(1 − ρ)) on [r1, r2].

    A 1000-point grid locates the best sample; golden-section search then
    refines within the neighbouring grid cells to 1e-4 m. Ties go to the
    smaller radius.
    """
    if not 0 < r1 <= r2:
        raise DomainError(f"Radius interval must satisfy 0 < r1 <= r2, got [{r1}, {r2}]")
    if r1 == r2:
        return float(r1)
    grid = np.linspace(r1, r2, RADIUS_GRID_POINTS)
    values = radius_objective(profile, grid)
    k = int(np.argmax(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    refined = golden_section_max(lambda r: float(radius_objective(profile, r)), lo, hi, RADIUS_TOL)
    if float(radius_objective(profile, refined)) > values[k]:
        return float(refined)
    return float(grid[k])


def default_angles(n: int) -> List[float]:
    """Bearings with zero angle residual: θ_k = 2πk/N for N ≥ 3, (0, π/2) for N = 2."""
    if n < 1:
        raise DomainError(f"Need at least one agent, got {n}")
    if n == 1:
        return [0.0]
    if n == 2:
        return [0.0, math.pi / 2]
    return [2 * math.pi * k / n for k in range(n)]


def doptimal_placement(anchor, n: int, r: float, angles: Optional[List[float]] = None) -> np.ndarray:
    """Measurement locations anchor + r (cos θ_k, sin θ_k) maximising det of the total FIM."""
    if n < 2:
        raise DomainError(f"D-optimal placement needs N >= 2, got {n}")
    if r <= 0:
        raise DomainError(f"Radius must be positive, got {r}")
    angles = default_angles(n) if angles is None else list(angles)
    if len(angles) != n:
        raise DomainError(f"Expected {n} angles, got {len(angles)}")
    spec = GeometrySpec(radius=r, angles=angles, anchor=tuple(as_points(anchor).tolist()))
    return spec.positions()


def design_geometry(anchor, n: int, profile: RangeProfile, r_range: Tuple[float, float] = DEFAULT_RADIUS_RANGE,
                    angles: Optional[List[float]] = None) -> GeometrySpec:
    """Pick the radius by `optimal_radius` and the bearings by `default_angles` (unless pinned)."""
    radius = optimal_radius(profile, *r_range)
    angles = default_angles(n) if angles is None else list(angles)
    spec = GeometrySpec(radius=radius, angles=angles, anchor=tuple(as_points(anchor).tolist()))
    logger.info(f"Designed {n}-agent geometry with r = {radius:.4f} m, residual = {spec.residual()}")
    return spec
