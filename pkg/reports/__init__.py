"""CSV output helpers."""
from reports.csv_export import (
    posterior_frame,
    write_curves,
    write_frame,
    write_kl_report,
    write_posterior_snapshot,
    write_trace,
)

__all__ = [
    "posterior_frame",
    "write_curves",
    "write_frame",
    "write_kl_report",
    "write_posterior_snapshot",
    "write_trace",
]
