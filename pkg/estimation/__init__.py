"""Discretised Bayesian source-location posterior."""
from estimation.grid import Box, CentreSet, uniform_grid
from estimation.posterior import (
    GridPosterior,
    MeasurementRecord,
    bayes_update,
    bayes_update_batch,
    decayed_indices,
    entropy,
    importance_init,
    log_likelihood_ratio_product,
    make_prior,
    map_index,
    posterior_mean,
)
from estimation.stream import filter_periodic_sequence

__all__ = [
    "Box",
    "CentreSet",
    "GridPosterior",
    "MeasurementRecord",
    "bayes_update",
    "bayes_update_batch",
    "decayed_indices",
    "entropy",
    "filter_periodic_sequence",
    "importance_init",
    "log_likelihood_ratio_product",
    "make_prior",
    "map_index",
    "posterior_mean",
    "uniform_grid",
]
