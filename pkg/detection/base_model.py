"""Base class for probability-of-detection models."""
import logging
from enum import Enum
from typing import Tuple

import numpy as np

from utils.errors import DomainError

logger = logging.getLogger(__name__)

# Step (m) for central differences of ℓ with respect to the source location.
GRADIENT_STEP = 1e-5


class ModelKind(str, Enum):
    """Closed set of supported detection models."""
    FRIIS_Q = "friis_q"
    GENERIC_RANGE = "generic_range"
    TABULATED = "tabulated"


def as_points(a) -> np.ndarray:
    """Coerce a location or stack of locations to a float array of shape (..., 2)."""
    arr = np.asarray(a, dtype=float)
    if arr.shape[-1:] != (2,):
        raise DomainError(f"Expected planar locations with trailing dimension 2, got shape {arr.shape}")
    return arr


class DetectionModel:
    """Probability ℓ(s, x) that an agent at x registers a detection from a source at s.

    Subclasses implement `detection_probability`; everything else is derived
    from it unless a subclass can do better (tail-accurate complements,
    analytic gradients). All methods broadcast over leading dimensions of
    `s` and `x`.
    """

    kind: ModelKind

    def detection_probability(self, s, x) -> np.ndarray:
        """ℓ(s, x), strictly inside (0, 1)."""
        raise NotImplementedError

    def miss_probability(self, s, x) -> np.ndarray:
        """1 − ℓ(s, x)."""
        return 1.0 - self.detection_probability(s, x)

    def probabilities(self, s, x) -> Tuple[np.ndarray, np.ndarray]:
        """(ℓ, 1 − ℓ) at (s, x)."""
        return self.detection_probability(s, x), self.miss_probability(s, x)

    def log_probabilities(self, s, x) -> Tuple[np.ndarray, np.ndarray]:
        """(ln ℓ, ln(1 − ℓ)) at (s, x)."""
        ell, miss = self.probabilities(s, x)
        return np.log(ell), np.log(miss)

    def gradient(self, s, x) -> np.ndarray:
        """∇_s ℓ(s, x) by central differences."""
        s = as_points(s)
        x = as_points(x)
        grad = np.zeros(np.broadcast_shapes(s.shape, x.shape))
        for axis in range(2):
            step = np.zeros(2)
            step[axis] = GRADIENT_STEP
            upper = self.detection_probability(s + step, x)
            lower = self.detection_probability(s - step, x)
            grad[..., axis] = (upper - lower) / (2.0 * GRADIENT_STEP)
        return grad

    def likelihood(self, d, s, x) -> np.ndarray:
        """g(d | s; x) = ℓ^d (1 − ℓ)^(1 − d)."""
        d = np.asarray(d)
        if not np.all((d == 0) | (d == 1)):
            raise DomainError(f"Readings must be 0 or 1, got {d}")
        ell, miss = self.probabilities(s, x)
        return np.where(d == 1, ell, miss)

    def log_likelihood(self, d, s, x) -> np.ndarray:
        """ln g(d | s; x)."""
        d = np.asarray(d)
        if not np.all((d == 0) | (d == 1)):
            raise DomainError(f"Readings must be 0 or 1, got {d}")
        log_ell, log_miss = self.log_probabilities(s, x)
        return np.where(d == 1, log_ell, log_miss)

    def sample_measurement(self, rng: np.random.Generator, s, x) -> np.ndarray:
        """Draw binary readings, Bernoulli with success probability ℓ(s, x)."""
        ell = np.asarray(self.detection_probability(s, x))
        return (rng.random(ell.shape) < ell).astype(np.int8)

    def describe(self) -> str:
        return self.kind.value
