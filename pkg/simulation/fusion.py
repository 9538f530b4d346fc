"""Fusion centres: consume measurement epochs and publish estimates."""
import logging
from typing import Sequence

import numpy as np
from prometheus_client import Counter
from scipy.special import entr

from detection.base_model import DetectionModel
from estimation.grid import Box, CentreSet
from estimation.posterior import (
    NORMALISER_FLOOR,
    GridPosterior,
    MeasurementRecord,
    bayes_update,
    entropy,
    map_index,
    posterior_mean,
)
from utils.errors import DomainError, ParticleDegeneracy

logger = logging.getLogger(__name__)

MEASUREMENTS_FUSED = Counter('binloc_measurements_fused_total', 'Number of binary readings fused', ['fusion'])


class FusionCentre:
    """Interface shared by the grid estimator and particle baselines."""

    label: str = "fusion"

    def process_epoch(self, records: Sequence[MeasurementRecord]) -> None:
        """Fuse every record of one epoch, in the given arrival order."""
        raise NotImplementedError

    def posterior_mean(self) -> np.ndarray:
        raise NotImplementedError

    def map_estimate(self) -> np.ndarray:
        raise NotImplementedError

    def entropy(self) -> float:
        raise NotImplementedError

    @property
    def measurements(self) -> int:
        raise NotImplementedError


class GridFusionCentre(FusionCentre):
    """Discrete Bayes recursion over fixed centres."""

    label = "grid"

    def __init__(self, cs: CentreSet, model: DetectionModel, prior: GridPosterior):
        self.cs = cs
        self.model = model
        self.posterior = prior

    def process_epoch(self, records: Sequence[MeasurementRecord]) -> None:
        for rec in records:
            self.posterior = bayes_update(self.posterior, rec, self.cs, self.model)
        MEASUREMENTS_FUSED.labels(fusion=self.label).inc(len(records))

    def posterior_mean(self) -> np.ndarray:
        return posterior_mean(self.posterior, self.cs)

    def map_estimate(self) -> np.ndarray:
        return self.cs.centres[map_index(self.posterior)].copy()

    def entropy(self) -> float:
        return entropy(self.posterior)

    @property
    def measurements(self) -> int:
        return self.posterior.step


class ParticleFusionCentre(FusionCentre):
    """SIR with zero process noise and multinomial resampling after every epoch.

    The reported mean is the weighted particle mean before resampling.
    Entropy and MAP refer to the empirical distribution of distinct
    particle locations after resampling.
    """

    label = "sir"

    def __init__(self, particles: np.ndarray, model: DetectionModel, rng: np.random.Generator):
        particles = np.asarray(particles, dtype=float)
        if particles.ndim != 2 or particles.shape[0] < 1 or particles.shape[1] != 2:
            raise DomainError("Need at least one planar particle")
        self.particles = particles
        self.weights = np.full(particles.shape[0], 1.0 / particles.shape[0])
        self.model = model
        self.rng = rng
        self._mean = particles.mean(axis=0)
        self._count = 0

    @classmethod
    def uniform(cls, n: int, box: Box, model: DetectionModel, rng: np.random.Generator) -> "ParticleFusionCentre":
        if n < 1:
            raise DomainError(f"Particle count must be at least 1, got {n}")
        return cls(box.sample_uniform(rng, n), model, rng)

    @property
    def size(self) -> int:
        return self.particles.shape[0]

    def process_epoch(self, records: Sequence[MeasurementRecord]) -> None:
        w = self.weights.copy()
        for rec in records:
            w = w * self.model.likelihood(rec.reading, self.particles, rec.location)
            total = w.sum()
            if not total >= NORMALISER_FLOOR:
                raise ParticleDegeneracy(f"All {self.size} particle weights underflowed after {self._count} readings")
            w = w / total
            self._count += 1
        self._mean = w @ self.particles
        idx = self.rng.choice(self.size, size=self.size, replace=True, p=w)
        self.particles = self.particles[idx]
        self.weights = np.full(self.size, 1.0 / self.size)
        MEASUREMENTS_FUSED.labels(fusion=self.label).inc(len(records))

    def _support(self):
        return np.unique(self.particles, axis=0, return_counts=True)

    def posterior_mean(self) -> np.ndarray:
        return self._mean.copy()

    def map_estimate(self) -> np.ndarray:
        locations, counts = self._support()
        return locations[int(np.argmax(counts))].copy()

    def entropy(self) -> float:
        _, counts = self._support()
        return float(entr(counts / counts.sum()).sum())

    @property
    def measurements(self) -> int:
        return self._count
