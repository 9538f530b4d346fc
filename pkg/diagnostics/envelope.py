"""Diagnostics for fusion with an envelope ℓ̂ ≥ ℓ in place of the true model."""
import logging
from typing import Optional, Tuple

import numpy as np

from detection.base_model import DetectionModel, as_points
from diagnostics.divergence import DEFAULT_TIE_TOL, KLReport, kl_profile, report_from_values
from estimation.grid import Box, CentreSet
from utils.errors import EnvelopeViolation

logger = logging.getLogger(__name__)

ENVELOPE_SAMPLES = 10_000


def check_envelope(true_m: DetectionModel, env_m: DetectionModel, region: Box,
                   samples: int = ENVELOPE_SAMPLES, seed: int = 0,
                   agent_region: Optional[Box] = None) -> None:
    """Verify ℓ̂(s, x) ≥ ℓ(s, x) on uniformly sampled pairs.

    Sources are drawn from `region`, agent locations from `agent_region`
    (defaults to `region`).

    Raises:
        EnvelopeViolation: At the first sampled pair where ℓ̂ < ℓ
    """
    rng = np.random.default_rng(seed)
    s = region.sample_uniform(rng, samples)
    x = (agent_region or region).sample_uniform(rng, samples)
    gap = env_m.detection_probability(s, x) - true_m.detection_probability(s, x)
    bad = np.flatnonzero(gap < 0)
    if bad.size:
        k = bad[np.argmin(gap[bad])]
        raise EnvelopeViolation(
            f"{env_m.describe()} is not an envelope for {true_m.describe()}: "
            f"deficit {-gap[k]:.3e} at s={s[k].round(3).tolist()}, x={x[k].round(3).tolist()} "
            f"({bad.size} of {samples} sampled pairs)"
        )


def envelope_kl_sequence(s, x, xs, true_m: DetectionModel, env_m: DetectionModel) -> float:
    """K(s, ℓ ‖ x, ℓ̂; x_1:n) = −Σ_k μ(ℓ̂(x, x_k), ℓ(s, x_k), ℓ(s, x_k))."""
    xs = as_points(xs).reshape(-1, 2)
    s = as_points(s)
    log_x, log1m_x = env_m.log_probabilities(as_points(x), xs)
    log_z, log1m_z = true_m.log_probabilities(s, xs)
    z, one_minus_z = true_m.probabilities(s, xs)
    return max(float(np.sum(z * (log_z - log_x) + one_minus_z * (log1m_z - log1m_x))), 0.0)


def envelope_minimiser_set(s, xs, cs: CentreSet, true_m: DetectionModel, env_m: DetectionModel,
                           tie_tol: float = DEFAULT_TIE_TOL, samples: int = ENVELOPE_SAMPLES,
                           seed: int = 0) -> KLReport:
    """B(ℓ | ℓ̂): centres minimising K(s, ℓ ‖ c_i, ℓ̂; x_1:n).

    Raises:
        EnvelopeViolation: If ℓ̂ fails to dominate ℓ on the sampled pairs
    """
    check_envelope(true_m, env_m, cs.region, samples=samples, seed=seed)
    return report_from_values(kl_profile(s, xs, cs, true_m, hyp_model=env_m), tie_tol)


def closeness_condition(report: KLReport, xs, cs: CentreSet, env_m: DetectionModel) -> bool:
    """True if every centre is dominated by some member of B(ℓ | ℓ̂).

    Centre c_i is dominated by c_j when ℓ̂(c_j, x_k) ≥ ℓ̂(c_i, x_k) at every
    measurement location. Under this condition B(ℓ̂ | ℓ̂) ⊆ B(ℓ | ℓ̂).
    """
    xs = as_points(xs).reshape(-1, 2)
    omega = env_m.detection_probability(cs.centres[:, None, :], xs[None, :, :])
    best = omega[report.minimisers]
    # dominated[j, i]: member j of B dominates centre i
    dominated = np.all(best[:, None, :] >= omega[None, :, :], axis=2)
    return bool(np.all(dominated.any(axis=0)))


def kl_gap_terms(i: int, j: int, s, xs, cs: CentreSet, true_m: DetectionModel,
                 env_m: DetectionModel) -> Tuple[float, float]:
    """Both sides of the KL-difference comparison between truth ℓ̂ and truth ℓ.

    Returns:
        (lhs, rhs) where lhs = [K̂_j − K̂_i] − [K_j − K_i] with K̂ taking ℓ̂ as the
        truth, and rhs = Σ_k (ẑ_k − z_k) ln[ω̂ⁱ(1 − ω̂ʲ) / (ω̂ʲ(1 − ω̂ⁱ))]
    """
    xs = as_points(xs).reshape(-1, 2)
    with_env_truth = kl_profile(s, xs, cs, env_m, hyp_model=env_m)
    with_true_truth = kl_profile(s, xs, cs, true_m, hyp_model=env_m)
    lhs = (with_env_truth[j] - with_env_truth[i]) - (with_true_truth[j] - with_true_truth[i])
    log_i, log1m_i = env_m.log_probabilities(cs.centres[i], xs)
    log_j, log1m_j = env_m.log_probabilities(cs.centres[j], xs)
    z_hat = env_m.detection_probability(as_points(s), xs)
    z = true_m.detection_probability(as_points(s), xs)
    rhs = np.sum((z_hat - z) * (log_i + log1m_j - log_j - log1m_i))
    return float(lhs), float(rhs)
