"""Sequential importance resampling baseline for a stationary source."""
import logging
from functools import partial

from simulation.engine import SimTrace, particle_fusion, run_scenario
from simulation.fusion import ParticleFusionCentre
from utils.errors import DomainError

logger = logging.getLogger(__name__)

__all__ = ["ParticleFusionCentre", "particle_fusion", "sir_baseline"]


def sir_baseline(cfg, particles: int, seed) -> SimTrace:
    """Run the scenario with SIR fusion over `particles` particles drawn uniformly in the grid box."""
    if particles < 1:
        raise DomainError(f"Particle count must be at least 1, got {particles}")
    return run_scenario(cfg, seed, fusion_factory=partial(particle_fusion, particles=particles))
