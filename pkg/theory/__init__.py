"""Statistical checks behind the posterior decay results."""
from theory.products import (
    ProductExperiment,
    cesaro_drift,
    cesaro_path,
    cesaro_table,
    drift_std,
    empirical_product_tail,
    expected_log_factor,
    hoeffding_bound,
    tail_table,
)

__all__ = [
    "ProductExperiment",
    "cesaro_drift",
    "cesaro_path",
    "cesaro_table",
    "drift_std",
    "empirical_product_tail",
    "expected_log_factor",
    "hoeffding_bound",
    "tail_table",
]
