"""Agent kinematics, the formation control law and the measurement timing model."""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from detection.base_model import as_points
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AgentState:
    """Planar position, the local copy of the fused estimate, and the formation offset.

    `estimate_epoch` is the epoch whose broadcast the local copy came from,
    or -1 while the agent still holds the prior mean.
    """
    position: np.ndarray
    estimate: np.ndarray
    offset: np.ndarray
    estimate_epoch: int = -1

    def __post_init__(self):
        for name in ("position", "estimate", "offset"):
            object.__setattr__(self, name, as_points(getattr(self, name)).copy())

    @property
    def target(self) -> np.ndarray:
        """Equilibrium ŝ_i + d_i of the control law."""
        return self.estimate + self.offset

    def with_estimate(self, estimate, epoch: int) -> "AgentState":
        return replace(self, estimate=estimate, estimate_epoch=epoch)


def control(x_i, s_hat_i, d_i) -> np.ndarray:
    """u_i = −(x_i − ŝ_i − d_i)."""
    return -(as_points(x_i) - as_points(s_hat_i) - as_points(d_i))


def step_dynamics(a: AgentState, u, dt: float) -> AgentState:
    """One explicit Euler step of ẋ_i = u_i."""
    if dt <= 0:
        raise DomainError(f"Integration step must be positive, got {dt}")
    return replace(a, position=a.position + as_points(u) * dt)


def integrate(a: AgentState, duration: float, dt: float, enabled: bool = True) -> AgentState:
    """Advance the closed loop over `duration` seconds with the local estimate held fixed.

    The interval is split into ceil(duration / dt) equal sub-steps.
    """
    if duration <= 0 or not enabled:
        return a
    n_steps = max(1, int(math.ceil(duration / dt - 1e-9)))
    h = duration / n_steps
    for _ in range(n_steps):
        a = step_dynamics(a, control(a.position, a.estimate, a.offset), h)
    return a


class TimingModel(BaseModel):
    """Measurement period T, round-trip delay τ and integration step."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    period: float = Field(0.04, gt=0, description="Measurement period T, s")
    delay: float = Field(0.02, ge=0, description="Round-trip delay τ, s")
    dt: Optional[float] = Field(None, gt=0, description="Euler step, s; derived when omitted")

    @model_validator(mode="after")
    def _check_relations(self):
        if not self.period > self.delay:
            raise ValueError(f"period T={self.period} must exceed delay tau={self.delay}")
        if self.dt is not None:
            limit = self.delay / 4 if self.delay > 0 else self.period / 8
            if self.dt > limit * (1 + 1e-12):
                raise ValueError(f"dt={self.dt} exceeds the admissible step {limit}")
        return self

    @property
    def step(self) -> float:
        """Integration step in use: dt if given, else T/8 capped at τ/4."""
        if self.dt is not None:
            return self.dt
        if self.delay > 0:
            return min(self.period / 8, self.delay / 4)
        return self.period / 8

    def epoch_time(self, epoch: int) -> float:
        return epoch * self.period
