"""Search regions and discretisation centres."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from detection.base_model import as_points
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle [xmin, xmax] × [ymin, ymax] in metres."""
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise DomainError(f"Degenerate box {self}")

    @classmethod
    def centred(cls, width: float, height: Optional[float] = None) -> "Box":
        height = width if height is None else height
        return cls(-width / 2.0, width / 2.0, -height / 2.0, height / 2.0)

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def centre(self) -> np.ndarray:
        return np.array([(self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0])

    def contains(self, points, tol: float = 1e-9) -> np.ndarray:
        p = as_points(points)
        return ((p[..., 0] >= self.xmin - tol) & (p[..., 0] <= self.xmax + tol)
                & (p[..., 1] >= self.ymin - tol) & (p[..., 1] <= self.ymax + tol))

    def contains_box(self, other: "Box") -> bool:
        return (self.xmin <= other.xmin and self.xmax >= other.xmax
                and self.ymin <= other.ymin and self.ymax >= other.ymax)

    def inflate(self, margin: float) -> "Box":
        return Box(self.xmin - margin, self.xmax + margin, self.ymin - margin, self.ymax + margin)

    def sample_uniform(self, rng: np.random.Generator, n: Optional[int] = None) -> np.ndarray:
        size = (2,) if n is None else (n, 2)
        u = rng.random(size)
        return np.stack([self.xmin + u[..., 0] * self.width, self.ymin + u[..., 1] * self.height], axis=-1)


@dataclass(frozen=True, eq=False)
class CentreSet:
    """Distinct discretisation points c_1..c_M inside a bounding region."""
    centres: np.ndarray
    region: Box

    def __post_init__(self):
        centres = np.array(as_points(self.centres), dtype=float)
        if centres.ndim != 2 or centres.shape[0] < 1:
            raise DomainError("A centre set needs at least one planar centre")
        if np.unique(centres, axis=0).shape[0] != centres.shape[0]:
            raise DomainError("Centres must be pairwise distinct")
        if not np.all(self.region.contains(centres)):
            raise DomainError("Every centre must lie inside the declared region")
        centres.setflags(write=False)
        object.__setattr__(self, "centres", centres)

    @property
    def size(self) -> int:
        return self.centres.shape[0]

    def __len__(self) -> int:
        return self.size

    def nearest_index(self, location) -> int:
        """Index of the centre closest to `location` (lowest index on ties)."""
        d = np.linalg.norm(self.centres - as_points(location), axis=-1)
        return int(np.argmin(d))


def uniform_grid(side: int, box: Box) -> CentreSet:
    """M = side × side centres at the midpoints of a uniform grid over `box`.

    Centres are ordered row by row, x varying fastest.
    """
    if side < 1:
        raise DomainError(f"Grid side must be at least 1, got {side}")
    xs = box.xmin + (np.arange(side) + 0.5) * box.width / side
    ys = box.ymin + (np.arange(side) + 0.5) * box.height / side
    gx, gy = np.meshgrid(xs, ys)
    centres = np.column_stack([gx.ravel(), gy.ravel()])
    logger.debug(f"Built {side}x{side} grid with spacing {box.width / side:.3f} m")
    return CentreSet(centres=centres, region=box)
