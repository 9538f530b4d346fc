"""Multi-agent closed-loop simulation.

The event loop lives in `simulation.engine`; it depends on the scenario
schema, so it is imported from there rather than re-exported here.
"""
from simulation.agents import AgentState, TimingModel, control, integrate, step_dynamics
from simulation.fusion import FusionCentre, GridFusionCentre

__all__ = [
    "AgentState",
    "FusionCentre",
    "GridFusionCentre",
    "TimingModel",
    "control",
    "integrate",
    "step_dynamics",
]
