"""Bounds on single-measurement likelihood ratios."""
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from detection.base_model import DetectionModel, as_points
from estimation.grid import CentreSet
from estimation.posterior import MeasurementRecord
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RatioBounds:
    """ℓ₀ ≤ ℓ ≤ ℓ₁ over the relevant pairs, and the induced α ≤ Z ≤ β.

    `miss0` and `miss1` are 1 − ℓ₀ and 1 − ℓ₁. They are kept separately
    because ℓ₁ can round to 1.0 while its miss tail is still positive.
    """
    ell0: float
    ell1: float
    miss0: float
    miss1: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.ell0 > 0.0 and self.miss1 > 0.0 and self.ell0 <= self.ell1 and self.miss1 <= self.miss0):
            raise DomainError(f"Need 0 < ell0 <= ell1 and 0 < 1 - ell1 <= 1 - ell0, got "
                              f"ell = ({self.ell0}, {self.ell1}), miss = ({self.miss0}, {self.miss1})")
        if not 0.0 < self.alpha <= 1.0 <= self.beta < np.inf:
            raise DomainError(f"Need 0 < alpha <= 1 <= beta < inf, got ({self.alpha}, {self.beta})")

    @classmethod
    def from_probabilities(cls, ell0: float, ell1: float, miss0: float = None, miss1: float = None) -> "RatioBounds":
        """Build from the extreme detection probabilities.

        Pass `miss0`/`miss1` when the model computes them from their own tail.
        """
        ell0, ell1 = np.float64(ell0), np.float64(ell1)
        miss0 = 1.0 - ell0 if miss0 is None else np.float64(miss0)
        miss1 = 1.0 - ell1 if miss1 is None else np.float64(miss1)
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = min(ell0 / ell1, miss1 / miss0)
            beta = max(ell1 / ell0, miss0 / miss1)
        return cls(float(ell0), float(ell1), float(miss0), float(miss1), float(alpha), float(beta))

    def contains(self, z, rtol: float = 1e-12) -> bool:
        z = np.asarray(z, dtype=float)
        return bool(np.all(z >= self.alpha * (1 - rtol)) and np.all(z <= self.beta * (1 + rtol)))


def ratio_bounds(cs: CentreSet, xs, s, m: DetectionModel) -> RatioBounds:
    """Extreme detection probabilities over (centres ∪ {s}) × xs and the ratio bounds they imply."""
    xs = as_points(xs).reshape(-1, 2)
    if xs.shape[0] == 0:
        raise DomainError("ratio_bounds needs at least one measurement location")
    points = np.vstack([cs.centres, as_points(s).reshape(1, 2)])
    ell, miss = m.probabilities(points[:, None, :], xs[None, :, :])
    # extremes of each tail taken separately: ℓ can saturate at 1.0 on several pairs
    return RatioBounds.from_probabilities(ell.min(), ell.max(), miss.max(), miss.min())


def likelihood_ratios(records: Iterable[MeasurementRecord], i: int, j: int, cs: CentreSet,
                      m: DetectionModel) -> np.ndarray:
    """Z_k^(i,j) = g(d_k | c_i; x_k) / g(d_k | c_j; x_k) for each record."""
    pair = cs.centres[[i, j]]
    ratios = []
    for rec in records:
        g = m.likelihood(rec.reading, pair, rec.location)
        ratios.append(g[0] / g[1])
    return np.asarray(ratios, dtype=float)
