"""Discretised Bayes recursion over grid centres."""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import entr

from detection.base_model import DetectionModel, as_points
from estimation.grid import Box, CentreSet
from utils.errors import DegenerateWeights, DomainError, NumericalUnderflow

logger = logging.getLogger(__name__)

# Smallest admissible Bayes normaliser before renormalisation.
NORMALISER_FLOOR = 1e-300
# Tolerance on Σ weights = 1 accepted when constructing a posterior.
NORMALISATION_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementRecord:
    """One (x_k, d_k, t_k) triple as processed by the fusion centre.

    `agent_id` is informational; fusion never depends on it.
    """
    location: Tuple[float, float]
    reading: int
    timestamp: float = 0.0
    agent_id: int = 0

    def __post_init__(self):
        if self.reading not in (0, 1):
            raise DomainError(f"Reading must be 0 or 1, got {self.reading}")
        if self.timestamp < 0:
            raise DomainError(f"Timestamp must be non-negative, got {self.timestamp}")
        location = tuple(float(v) for v in self.location)
        if len(location) != 2 or not np.all(np.isfinite(location)):
            raise DomainError(f"Location must be a finite planar point, got {self.location}")
        object.__setattr__(self, "location", location)
        object.__setattr__(self, "reading", int(self.reading))


@dataclass(frozen=True, eq=False)
class GridPosterior:
    """Probability weights p̂_k over the centres after k measurements.

    With importance-sampled centres the same vector is the normalised
    importance weight vector ŵ_k.
    """
    weights: np.ndarray
    step: int = 0

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size < 1:
            raise DomainError("Posterior weights must be a non-empty vector")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > NORMALISATION_TOL:
            raise DomainError("Posterior weights must be non-negative and sum to one")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, size: int) -> "GridPosterior":
        return cls(np.full(size, 1.0 / size))

    @property
    def size(self) -> int:
        return self.weights.size


def make_prior(cs: CentreSet, kind: str = "uniform", mean=None, std: Optional[float] = None) -> GridPosterior:
    """Discrete prior p̂_0 on the centres.

    Args:
        cs: Centre set
        kind: "uniform" or "gaussian" (isotropic, evaluated at the centres)
        mean: Gaussian mean, defaults to the region centre
        std: Gaussian standard deviation in metres

    Returns:
        Normalised prior with every weight strictly positive
    """
    if kind == "uniform":
        return GridPosterior.uniform(cs.size)
    if kind == "gaussian":
        if std is None or std <= 0:
            raise DomainError("A gaussian prior needs a positive std")
        mean = cs.region.centre if mean is None else as_points(mean)
        sq = np.sum((cs.centres - mean) ** 2, axis=-1)
        log_w = -0.5 * sq / std ** 2
        w = np.exp(log_w - log_w.max())
        return GridPosterior(w / w.sum())
    raise DomainError(f"Unsupported prior kind: {kind}")


def bayes_update(p: GridPosterior, rec: MeasurementRecord, cs: CentreSet, m: DetectionModel) -> GridPosterior:
    """Apply one step of the discrete Bayes recursion.

    Raises:
        NumericalUnderflow: If Σ_i g(d_k | c_i; x_k) p̂_{k-1}(i) < 1e-300
    """
    g = m.likelihood(rec.reading, cs.centres, rec.location)
    unnormalised = p.weights * g
    normaliser = unnormalised.sum()
    if not normaliser >= NORMALISER_FLOOR:
        raise NumericalUnderflow(
            f"Bayes normaliser {normaliser:.3e} below floor at step {p.step + 1} "
            f"(reading {rec.reading} at {rec.location})"
        )
    return GridPosterior(unnormalised / normaliser, p.step + 1)


def bayes_update_batch(p: GridPosterior, records: Iterable[MeasurementRecord], cs: CentreSet,
                       m: DetectionModel) -> GridPosterior:
    for rec in records:
        p = bayes_update(p, rec, cs, m)
    return p


def posterior_mean(p: GridPosterior, cs: CentreSet) -> np.ndarray:
    """Σ_i p̂(i) c_i."""
    return p.weights @ cs.centres


def map_index(p: GridPosterior) -> int:
    """Index of the largest weight; the lowest index wins ties (0-based)."""
    return int(np.argmax(p.weights))


def entropy(p: GridPosterior) -> float:
    """Shannon entropy in nats, with 0 ln 0 = 0."""
    return float(entr(p.weights).sum())


def decayed_indices(p: GridPosterior, eps: float) -> np.ndarray:
    """Indices with weight below `eps` after p.step updates.

    This is a finite-horizon stand-in for the set of indices whose weight
    vanishes almost surely; it says nothing about the limit.
    """
    return np.flatnonzero(p.weights < eps)


def importance_init(particles, phi_values: Sequence[float], p0: Callable,
                    region: Optional[Box] = None) -> Tuple[CentreSet, GridPosterior]:
    """Turn importance samples into centres with weights ∝ p0(c_i) / φ(c_i).

    Every particle becomes a centre; those where the prior vanishes keep
    weight zero through every later update.

    Raises:
        DomainError: If any density value is not positive
        DegenerateWeights: If p0 vanishes at every particle
    """
    particles = as_points(particles)
    phi_values = np.asarray(phi_values, dtype=float)
    if phi_values.shape != particles.shape[:1]:
        raise DomainError("Need one importance density value per particle")
    if np.any(phi_values <= 0):
        raise DomainError("Importance density values must be positive")
    prior_values = np.asarray([p0(c) for c in particles], dtype=float)
    ratios = prior_values / phi_values
    keep = ratios > 0
    if not np.any(keep):
        raise DegenerateWeights("Prior density is zero at every particle")
    if not np.all(keep):
        logger.warning(f"{np.count_nonzero(~keep)} particles have zero prior density")
    if region is None:
        lo = particles.min(axis=0)
        hi = particles.max(axis=0)
        pad = np.where(hi > lo, 0.0, 0.5)
        region = Box(lo[0] - pad[0], hi[0] + pad[0], lo[1] - pad[1], hi[1] + pad[1])
    cs = CentreSet(centres=particles, region=region)
    return cs, GridPosterior(ratios / ratios.sum())


def log_likelihood_ratio_product(records: Iterable[MeasurementRecord], i: int, j: int, cs: CentreSet,
                                 m: DetectionModel) -> float:
    """ln ∏_k Z_k^{(i,j)} = Σ_k ln g(d_k | c_i; x_k) − ln g(d_k | c_j; x_k)."""
    total = 0.0
    pair = cs.centres[[i, j]]
    for rec in records:
        log_g = m.log_likelihood(rec.reading, pair, rec.location)
        total += float(log_g[0] - log_g[1])
    return total
