"""Detection model interpolated from a distance → probability table."""
from typing import Sequence

import numpy as np

from detection.base_model import ModelKind
from detection.range_model import PROFILE_STEP, RangeModel, RangeProfile
from utils.errors import DomainError, ModelDomainError


class TabulatedProfile(RangeProfile):
    """Piecewise-linear ρ through (distance, probability) samples."""

    name = "tabulated"

    def __init__(self, distances: Sequence[float], probabilities: Sequence[float]):
        distances = np.asarray(distances, dtype=float)
        probabilities = np.asarray(probabilities, dtype=float)
        if distances.ndim != 1 or distances.shape != probabilities.shape or distances.size < 2:
            raise DomainError("A table needs at least two matching distance/probability samples")
        if distances[0] < 0 or np.any(np.diff(distances) <= 0):
            raise DomainError("Table distances must be non-negative and strictly increasing")
        if np.any(probabilities <= 0) or np.any(probabilities >= 1):
            raise DomainError("Table probabilities must lie in (0, 1)")
        self.distances = distances
        self.probabilities = probabilities
        steps = np.diff(probabilities)
        self.injective = bool(np.all(steps < 0) or np.all(steps > 0))

    def _check(self, r: np.ndarray) -> None:
        if np.any(r < self.distances[0]) or np.any(r > self.distances[-1]):
            raise ModelDomainError(
                f"Distance outside table [{self.distances[0]}, {self.distances[-1]}] m: "
                f"min {np.min(r):.4g}, max {np.max(r):.4g}"
            )

    def rho(self, r):
        r = np.asarray(r, dtype=float)
        self._check(r)
        return np.interp(r, self.distances, self.probabilities)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        self._check(r)
        lower = np.clip(r - PROFILE_STEP, self.distances[0], self.distances[-1])
        upper = np.clip(r + PROFILE_STEP, self.distances[0], self.distances[-1])
        return (np.interp(upper, self.distances, self.probabilities)
                - np.interp(lower, self.distances, self.probabilities)) / (upper - lower)


class TabulatedModel(RangeModel):
    """Range model backed by a `TabulatedProfile`."""

    kind = ModelKind.TABULATED

    def __init__(self, distances: Sequence[float], probabilities: Sequence[float]):
        super().__init__(TabulatedProfile(distances, probabilities))
