"""Friis transmission + Gaussian-noise threshold detector."""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import erfc, log_ndtr, ndtr

from detection.base_model import ModelKind, as_points
from detection.range_model import RangeModel, RangeProfile

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class FriisParams(BaseModel):
    """Friis link and detector parameters (SI units)."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    a_r: float = Field(1.0, gt=0, description="Receiver effective area, m²")
    a_t: float = Field(1.0, gt=0, description="Transmitter effective area, m²")
    p_t: float = Field(1.0, gt=0, description="Transmitted power, W")
    wavelength: float = Field(1.0, gt=0, description="Wavelength λ, m")
    altitude: float = Field(10.0, gt=0, description="Agent altitude z, m")
    threshold: float = Field(5e-3, gt=0, description="Detection threshold η, W")
    noise_sigma: float = Field(2.5e-3, gt=0, description="Noise standard deviation σ, W")

    @property
    def gain(self) -> float:
        """A_R A_T P_T / λ²."""
        return self.a_r * self.a_t * self.p_t / self.wavelength ** 2


def q_function(u) -> np.ndarray:
    """Upper-tail standard normal probability Q(u) = erfc(u / √2) / 2."""
    return 0.5 * erfc(np.asarray(u, dtype=float) / math.sqrt(2.0))


def received_power_at_range(r, p: FriisParams) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return p.gain / (r ** 2 + p.altitude ** 2)


def friis_received_power(s, x, p: FriisParams) -> np.ndarray:
    """P_R(s, x) = A_R A_T P_T / (λ² (‖s − x‖² + z²))."""
    r = np.linalg.norm(as_points(s) - as_points(x), axis=-1)
    return received_power_at_range(r, p)


class FriisProfile(RangeProfile):
    """ρ(r) = Q((η − P_R(r)) / σ) with its analytic derivative."""

    name = "friis_q"
    injective = True

    def __init__(self, params: FriisParams):
        self.params = params

    def standardised(self, r) -> np.ndarray:
        return (self.params.threshold - received_power_at_range(r, self.params)) / self.params.noise_sigma

    def rho(self, r):
        return ndtr(-self.standardised(r))

    def miss(self, r):
        return ndtr(self.standardised(r))

    def log_rho(self, r):
        return log_ndtr(-self.standardised(r))

    def log_miss(self, r):
        return log_ndtr(self.standardised(r))

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        p = self.params
        u = self.standardised(r)
        d_power = -2.0 * r * p.gain / (r ** 2 + p.altitude ** 2) ** 2
        return _INV_SQRT_2PI * np.exp(-0.5 * u ** 2) * d_power / p.noise_sigma


class FriisModel(RangeModel):
    """ℓ(s, x) = Q((η − P_R(s, x)) / σ).

    Both tails are evaluated directly so that ℓ and 1 − ℓ stay positive even
    when one of them rounds to 1 in double precision.
    """

    kind = ModelKind.FRIIS_Q

    def __init__(self, params: FriisParams = None):
        self.params = params or FriisParams()
        super().__init__(FriisProfile(self.params))

    def received_power(self, s, x) -> np.ndarray:
        return friis_received_power(s, x, self.params)

    def log_probabilities(self, s, x):
        r = self.distance(s, x)
        return self.profile.log_rho(r), self.profile.log_miss(r)

    def describe(self) -> str:
        return f"{self.kind.value}(P_T={self.params.p_t:g} W)"
