"""Numerical proxy for the set of locations indistinguishable from the source."""
import logging

import numpy as np

from detection.base_model import DetectionModel, as_points
from estimation.grid import Box
from utils.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_AMBIGUITY_TOL = 1e-6


def candidate_grid(region: Box, n: int) -> np.ndarray:
    """n × n candidate locations on a lattice spanning `region` edge to edge."""
    if n < 2:
        raise DomainError(f"Candidate grid needs n >= 2, got {n}")
    gx, gy = np.meshgrid(np.linspace(region.xmin, region.xmax, n), np.linspace(region.ymin, region.ymax, n))
    return np.column_stack([gx.ravel(), gy.ravel()])


def ambiguity_set_A(s, xs, candidates, m: DetectionModel, tol: float = DEFAULT_AMBIGUITY_TOL) -> np.ndarray:
    """Candidates x with |ℓ(x, x_k) − ℓ(s, x_k)| ≤ tol at every measurement location.

    The true set is a continuum object; this returns its members among
    `candidates`, so `s` is included only if it is itself a candidate.
    """
    if tol <= 0:
        raise DomainError(f"Ambiguity tolerance must be positive, got {tol}")
    xs = as_points(xs).reshape(-1, 2)
    candidates = as_points(candidates).reshape(-1, 2)
    reference = m.detection_probability(as_points(s), xs)
    values = m.detection_probability(candidates[:, None, :], xs[None, :, :])
    keep = np.all(np.abs(values - reference) <= tol, axis=1)
    logger.debug(f"{np.count_nonzero(keep)} of {candidates.shape[0]} candidates are indistinguishable")
    return candidates[keep]
