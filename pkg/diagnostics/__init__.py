"""Information-geometric diagnostics: μ, KL divergences, ratio bounds, sets A and B."""
from diagnostics.ambiguity import ambiguity_set_A, candidate_grid
from diagnostics.bounds import RatioBounds, likelihood_ratios, ratio_bounds
from diagnostics.divergence import (
    KLReport,
    decay_certificate,
    expected_log_ratio,
    kl_profile,
    kl_sequence,
    kl_single,
    minimiser_set_B,
    mu,
)
from diagnostics.envelope import (
    check_envelope,
    closeness_condition,
    envelope_kl_sequence,
    envelope_minimiser_set,
    kl_gap_terms,
)

__all__ = [
    "KLReport",
    "RatioBounds",
    "ambiguity_set_A",
    "candidate_grid",
    "check_envelope",
    "closeness_condition",
    "decay_certificate",
    "envelope_kl_sequence",
    "envelope_minimiser_set",
    "expected_log_ratio",
    "kl_gap_terms",
    "kl_profile",
    "kl_sequence",
    "kl_single",
    "likelihood_ratios",
    "minimiser_set_B",
    "mu",
    "ratio_bounds",
]
