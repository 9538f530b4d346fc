"""Expected log-likelihood ratios and KL divergences between measurement laws."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from detection.base_model import DetectionModel, as_points
from estimation.grid import CentreSet
from utils.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_TIE_TOL = 1e-9


def mu(x, y, z):
    """μ(x, y, z) = z ln(x / y) + (1 − z) ln((1 − x) / (1 − y)).

    The expected log-likelihood ratio of Bernoulli(x) against Bernoulli(y)
    when readings are drawn from Bernoulli(z).

    Raises:
        DomainError: If any argument leaves (0, 1)
    """
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    for label, v in (("x", x), ("y", y), ("z", z)):
        if np.any(v <= 0.0) or np.any(v >= 1.0):
            raise DomainError(f"mu argument {label} must lie in (0, 1), got {v}")
    value = z * (np.log(x) - np.log(y)) + (1.0 - z) * (np.log1p(-x) - np.log1p(-y))
    return float(value) if value.ndim == 0 else value


def _mu_terms(m_hyp_a: DetectionModel, a, m_hyp_b: DetectionModel, b, m_true: DetectionModel, s, xs):
    """Per-location μ(ℓ_a(a, x_k), ℓ_b(b, x_k), ℓ_true(s, x_k)), broadcast over leading dims of a, b."""
    log_a, log1m_a = m_hyp_a.log_probabilities(a, xs)
    log_b, log1m_b = m_hyp_b.log_probabilities(b, xs)
    z, one_minus_z = m_true.probabilities(s, xs)
    return z * (log_a - log_b) + one_minus_z * (log1m_a - log1m_b)


def expected_log_ratio(i: int, j: int, s, x_k, cs: CentreSet, m: DetectionModel):
    """μ_k^(i,j) = μ(ℓ(c_i, x_k), ℓ(c_j, x_k), ℓ(s, x_k)).

    `x_k` may be a single location or a stack, in which case one value per
    location is returned.
    """
    x_k = as_points(x_k)
    value = _mu_terms(m, cs.centres[i], m, cs.centres[j], m, as_points(s), x_k)
    return float(value) if np.ndim(value) == 0 else value


def decay_certificate(i: int, j: int, s, xs, cs: CentreSet, m: DetectionModel) -> float:
    """Σ_k μ_k^(i,j) over one period of a periodic location sequence.

    A negative value means the weight at i vanishes relative to j.
    """
    return float(np.sum(expected_log_ratio(i, j, s, as_points(xs).reshape(-1, 2), cs, m)))


def kl_single(s, x, x_k, m: DetectionModel) -> float:
    """K(s ‖ x; x_k), the divergence of Bernoulli(ℓ(x, x_k)) from Bernoulli(ℓ(s, x_k)) in nats."""
    value = -_mu_terms(m, as_points(x), m, as_points(s), m, as_points(s), as_points(x_k))
    return max(float(value), 0.0)


def kl_sequence(s, x, xs, m: DetectionModel) -> float:
    """K(s ‖ x; x_1:n) = Σ_k K(s ‖ x; x_k)."""
    xs = as_points(xs).reshape(-1, 2)
    if xs.shape[0] == 0:
        raise DomainError("kl_sequence needs at least one measurement location")
    terms = -_mu_terms(m, as_points(x), m, as_points(s), m, as_points(s), xs)
    return max(float(np.sum(terms)), 0.0)


def kl_profile(s, xs, cs: CentreSet, m: DetectionModel, hyp_model: Optional[DetectionModel] = None) -> np.ndarray:
    """K(s ‖ c_i; x_1:n) for every centre at once.

    With `hyp_model` the centres are scored under that model while readings
    follow `m`, i.e. K(s, ℓ ‖ c_i, ℓ̂; x_1:n).
    """
    hyp_model = hyp_model or m
    xs = as_points(xs).reshape(-1, 2)
    s = as_points(s)
    log_c, log1m_c = hyp_model.log_probabilities(cs.centres[:, None, :], xs[None, :, :])
    z, one_minus_z = m.probabilities(s, xs)
    log_z, log1m_z = m.log_probabilities(s, xs)
    terms = z * (log_z - log_c) + one_minus_z * (log1m_z - log1m_c)
    return np.maximum(terms.sum(axis=1), 0.0)


@dataclass(frozen=True, eq=False)
class KLReport:
    """Per-centre divergences and the set B of their minimisers."""
    values: np.ndarray
    minimisers: np.ndarray
    minimum: float
    tie_tol: float = DEFAULT_TIE_TOL

    def __post_init__(self):
        if np.any(self.values < 0):
            raise DomainError("KL values must be non-negative")
        if self.minimisers.size == 0:
            raise DomainError("The minimiser set cannot be empty")

    def contains(self, index: int) -> bool:
        return bool(np.any(self.minimisers == index))

    def as_set(self) -> set:
        return {int(i) for i in self.minimisers}

    def to_frame(self) -> pd.DataFrame:
        in_b = np.zeros(self.values.size, dtype=bool)
        in_b[self.minimisers] = True
        return pd.DataFrame({
            "index": np.arange(self.values.size),
            "kl_nats": self.values,
            "in_B": in_b,
        })


def report_from_values(values: np.ndarray, tie_tol: float = DEFAULT_TIE_TOL) -> KLReport:
    minimum = float(values.min())
    minimisers = np.flatnonzero(values <= minimum + tie_tol)
    return KLReport(values=values, minimisers=minimisers, minimum=minimum, tie_tol=tie_tol)


def minimiser_set_B(s, xs, cs: CentreSet, m: DetectionModel, tie_tol: float = DEFAULT_TIE_TOL) -> KLReport:
    """Centres minimising K(s ‖ c_i; x_1:n) within `tie_tol` nats.

    For an n-periodic location sequence, `xs` is one period.
    """
    values = kl_profile(s, xs, cs, m)
    report = report_from_values(values, tie_tol)
    logger.debug(f"B has {report.minimisers.size} of {cs.size} centres, min K = {report.minimum:.3e}")
    return report
