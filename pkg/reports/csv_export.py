"""CSV artifacts for external plotting."""
import logging
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

from estimation.grid import CentreSet
from estimation.posterior import GridPosterior

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _write(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def posterior_frame(p: GridPosterior, cs: CentreSet) -> pd.DataFrame:
    return pd.DataFrame({
        "index": np.arange(cs.size),
        "cx": cs.centres[:, 0],
        "cy": cs.centres[:, 1],
        "weight": p.weights,
    })


def write_posterior_snapshot(p: GridPosterior, cs: CentreSet, path: PathLike) -> Path:
    """index, cx, cy, weight."""
    return _write(posterior_frame(p, cs), Path(path))


def write_trace(trace, out_dir: PathLike, tag: str = "run") -> List[Path]:
    """epochs_<tag>.csv and measurements_<tag>.csv, plus the final posterior when available."""
    out_dir = Path(out_dir)
    paths = [
        _write(trace.epochs_frame(), out_dir / f"epochs_{tag}.csv"),
        _write(trace.measurements_frame(), out_dir / f"measurements_{tag}.csv"),
    ]
    if trace.final_posterior is not None:
        paths.append(write_posterior_snapshot(trace.final_posterior, trace.centres, out_dir / f"posterior_{tag}.csv"))
    return paths


def write_kl_report(report, path: PathLike) -> Path:
    """index, kl_nats, in_B."""
    return _write(report.to_frame(), Path(path))


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    return _write(frame, Path(path))


def write_curves(result, out_dir: PathLike) -> Dict[str, Path]:
    """curves_<label>.csv with columns k, rms_m for every bench cell."""
    out_dir = Path(out_dir)
    return {cell.label: _write(cell.curve_frame(), out_dir / f"curves_{cell.label}.csv") for cell in result.cells}
