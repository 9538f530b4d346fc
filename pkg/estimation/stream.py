"""Posterior filtering along a fixed, cyclic measurement-location sequence."""
import logging
from typing import List, Optional, Tuple

import numpy as np

from detection.base_model import DetectionModel, as_points
from estimation.grid import CentreSet
from estimation.posterior import GridPosterior, MeasurementRecord, bayes_update

logger = logging.getLogger(__name__)


def filter_periodic_sequence(
    prior: GridPosterior,
    cs: CentreSet,
    source,
    xs,
    model: DetectionModel,
    n: int,
    rng: np.random.Generator,
    true_model: Optional[DetectionModel] = None,
    keep_records: bool = False,
) -> Tuple[GridPosterior, List[MeasurementRecord]]:
    """Run n measurements taken cyclically at the locations `xs`.

    Readings are drawn from `true_model` (defaults to `model`); the recursion
    uses `model`. This is the static-team experiment: the k-th measurement
    is taken at xs[k mod len(xs)].

    Returns:
        Final posterior and, if `keep_records`, every processed record
    """
    xs = as_points(xs)
    true_model = true_model or model
    source = as_points(source)
    readings_per_loc = None
    posterior = prior
    records: List[MeasurementRecord] = []
    period = xs.shape[0]
    for k in range(n):
        if k % period == 0:
            readings_per_loc = true_model.sample_measurement(rng, source, xs)
        idx = k % period
        rec = MeasurementRecord(location=tuple(xs[idx]), reading=int(readings_per_loc[idx]),
                                timestamp=float(k // period), agent_id=idx)
        posterior = bayes_update(posterior, rec, cs, model)
        if keep_records:
            records.append(rec)
    return posterior, records
