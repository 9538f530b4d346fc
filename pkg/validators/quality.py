"""Cross-field consistency checks for scenario configurations."""
import logging
from typing import List

import numpy as np

from detection.registry import build_model
from diagnostics.envelope import check_envelope
from utils.errors import BinlocError

logger = logging.getLogger(__name__)

# Sampled pairs used when a config declares an envelope model.
CONFIG_ENVELOPE_SAMPLES = 2_000


class ScenarioChecker:
    """Checks relations that no single config section can see."""

    @staticmethod
    def check_geometry(cfg) -> List[str]:
        """Grid box must contain S; initial agents must be finite and inside the grid box."""
        issues = []
        arena = cfg.grid.box()
        if not arena.contains_box(cfg.region.box()):
            issues.append("grid: box must contain the search region S")
        positions = np.asarray(cfg.agents.positions, dtype=float)
        if not np.all(np.isfinite(positions)):
            issues.append("agents.positions: every coordinate must be finite")
        else:
            outside = [i for i, inside in enumerate(arena.contains(positions)) if not inside]
            if outside:
                issues.append(f"agents.positions: agents {outside} start outside the grid box")
        if cfg.run.source is not None and not cfg.region.box().contains(cfg.run.source):
            issues.append(f"run.source: {cfg.run.source} lies outside the search region")
        return issues

    @staticmethod
    def check_control(cfg) -> List[str]:
        issues = []
        angles = cfg.control.angles
        if angles is not None and len(angles) != cfg.n_agents:
            issues.append(f"control.angles: expected {cfg.n_agents} angles, got {len(angles)}")
        if cfg.prior.mean is not None and not cfg.grid.box().contains(cfg.prior.mean):
            issues.append("prior.mean: must lie inside the grid box")
        return issues

    @staticmethod
    def check_models(cfg) -> List[str]:
        """Models must build and, if present, the envelope must dominate the true model."""
        issues = []
        try:
            true_m = build_model(cfg.model)
            env_m = build_model(cfg.envelope) if cfg.envelope is not None else None
        except (BinlocError, ValueError) as e:
            return [f"model: {e}"]
        if env_m is not None:
            try:
                check_envelope(true_m, env_m, cfg.region.box(), samples=CONFIG_ENVELOPE_SAMPLES,
                               agent_region=cfg.grid.box())
            except BinlocError as e:
                issues.append(f"envelope: {e}")
        return issues

    @classmethod
    def check(cls, cfg) -> List[str]:
        issues = cls.check_geometry(cfg) + cls.check_control(cfg) + cls.check_models(cfg)
        for issue in issues:
            logger.debug(f"Config issue: {issue}")
        return issues
