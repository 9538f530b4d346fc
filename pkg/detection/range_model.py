"""Range-dependent detection models ℓ(s, x) = ρ(‖s − x‖)."""
import logging
from typing import Callable, Optional

import numpy as np

from detection.base_model import DetectionModel, ModelKind, as_points
from utils.errors import DomainError

logger = logging.getLogger(__name__)

# Step (m) for central differences of ρ.
PROFILE_STEP = 1e-4


class RangeProfile:
    """A map ρ: [0, ∞) → (0, 1) together with its derivative ρ′.

    Subclasses override `derivative` when an analytic form exists; the
    default is a central difference, one-sided at r = 0.
    """

    injective: bool = False
    name: str = "profile"

    def rho(self, r) -> np.ndarray:
        raise NotImplementedError

    def miss(self, r) -> np.ndarray:
        """1 − ρ(r)."""
        return 1.0 - self.rho(r)

    def derivative(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        lower = np.maximum(r - PROFILE_STEP, 0.0)
        upper = lower + 2.0 * PROFILE_STEP
        return (self.rho(upper) - self.rho(lower)) / (upper - lower)

    def __call__(self, r) -> np.ndarray:
        return self.rho(r)

    def validate(self, radii) -> None:
        """Check the codomain and, if declared injective, strict monotonicity on `radii`.

        Raises:
            DomainError: If a sampled value leaves (0, 1) or monotonicity fails
        """
        radii = np.sort(np.asarray(radii, dtype=float))
        values = self.rho(radii)
        if np.any(values <= 0.0) or np.any(self.miss(radii) <= 0.0):
            raise DomainError(f"Range profile '{self.name}' leaves the open interval (0, 1)")
        if self.injective and radii.size > 1:
            steps = np.diff(values)
            if not (np.all(steps < 0) or np.all(steps > 0)):
                raise DomainError(f"Range profile '{self.name}' is declared injective but is not strictly monotone")


class ConstantProfile(RangeProfile):
    """ρ ≡ p, an uninformative sensor."""

    name = "constant"

    def __init__(self, p: float):
        if not 0.0 < p < 1.0:
            raise DomainError(f"Constant detection probability must lie in (0, 1), got {p}")
        self.p = float(p)

    def rho(self, r):
        return np.full(np.shape(r), self.p)

    def derivative(self, r):
        return np.zeros(np.shape(r))


class ExponentialProfile(RangeProfile):
    """ρ(r) = p_far + (p_near − p_far) exp(−r / length_scale)."""

    name = "exponential"

    def __init__(self, p_near: float, p_far: float, length_scale: float):
        for label, value in (("p_near", p_near), ("p_far", p_far)):
            if not 0.0 < value < 1.0:
                raise DomainError(f"{label} must lie in (0, 1), got {value}")
        if length_scale <= 0:
            raise DomainError(f"length_scale must be positive, got {length_scale}")
        self.p_near = float(p_near)
        self.p_far = float(p_far)
        self.length_scale = float(length_scale)
        self.injective = p_near != p_far

    def rho(self, r):
        return self.p_far + (self.p_near - self.p_far) * np.exp(-np.asarray(r, dtype=float) / self.length_scale)

    def derivative(self, r):
        decay = np.exp(-np.asarray(r, dtype=float) / self.length_scale)
        return -(self.p_near - self.p_far) / self.length_scale * decay


class CallableProfile(RangeProfile):
    """Wraps plain callables; handy for experiments and tests."""

    name = "callable"

    def __init__(self, rho: Callable, rho_prime: Optional[Callable] = None, injective: bool = False):
        self._rho = rho
        self._rho_prime = rho_prime
        self.injective = injective

    def rho(self, r):
        return np.asarray(self._rho(np.asarray(r, dtype=float)), dtype=float)

    def derivative(self, r):
        if self._rho_prime is None:
            return super().derivative(r)
        return np.asarray(self._rho_prime(np.asarray(r, dtype=float)), dtype=float)


class RangeModel(DetectionModel):
    """Detection model determined by distance alone."""

    kind = ModelKind.GENERIC_RANGE

    def __init__(self, profile: RangeProfile):
        self.profile = profile

    def distance(self, s, x) -> np.ndarray:
        return np.linalg.norm(as_points(s) - as_points(x), axis=-1)

    def detection_probability(self, s, x):
        return self.profile.rho(self.distance(s, x))

    def miss_probability(self, s, x):
        return self.profile.miss(self.distance(s, x))

    def gradient(self, s, x):
        # ∇_s ρ(‖s − x‖) = ρ′(r) (s − x) / r, zero where the agent sits on the source
        diff = as_points(s) - as_points(x)
        r = np.linalg.norm(diff, axis=-1)
        slope = self.profile.derivative(r)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(r[..., None] > 0, diff / r[..., None], 0.0)
        return slope[..., None] * unit

    def range_profile(self) -> RangeProfile:
        return self.profile

    def describe(self) -> str:
        return f"{self.kind.value}:{self.profile.name}"
