"""Ops reproducing the asymptotic-error table, one dynamic branch per grid side."""
from pathlib import Path
from typing import Dict, Iterable, List

import pandas as pd
from dagster import DynamicOut, DynamicOutput, Field, OpExecutionContext, op
from prometheus_client import Counter

from bench.harness import BenchConfig, CellSpec, cell_asymptotic_error, cell_scenario, grid_label, run_cell
from reports.csv_export import write_frame
from utils.errors import NoQualifyingTrials
from validators.schema import parse_config

# Prometheus metrics
TABLE_CELLS_DONE = Counter(
    'binloc_error_table_cells_total',
    'Number of grid cells completed by the table job'
)


@op(config_schema={
    "grids": Field([int], default_value=[10, 20, 30, 40, 50]),
    "trials": Field(int, default_value=100),
    "k_max": Field(int, default_value=1000),
    "entropy_threshold": Field(float, default_value=1.0),
    "master_seed": Field(int, default_value=0),
    "controller": Field(bool, default_value=True),
    "scenario_path": Field(str, is_required=False),
    "out_dir": Field(str, default_value="out"),
})
def bench_settings(context: OpExecutionContext) -> Dict:
    """Validate the job config into a bench configuration."""
    conf = context.op_config
    scenario = parse_config(conf.get("scenario_path"))
    cfg = BenchConfig(
        grids=conf["grids"],
        trials=conf["trials"],
        k_max=conf["k_max"],
        entropy_threshold=conf["entropy_threshold"],
        master_seed=conf["master_seed"],
        controller=conf["controller"],
        scenario=scenario,
    )
    context.log.info(f"Table job over grids {cfg.grids} with {cfg.trials} trials each")
    return {"bench": cfg.model_dump(mode="json"), "out_dir": conf["out_dir"]}


@op(out=DynamicOut(int))
def grid_sides(context: OpExecutionContext, settings: Dict) -> Iterable[DynamicOutput[int]]:
    for side in settings["bench"]["grids"]:
        yield DynamicOutput(side, mapping_key=f"M{side}")


@op
def run_grid_cell(context: OpExecutionContext, side: int, settings: Dict) -> Dict:
    """All trials for one grid side; returns the table row and the RMS curve."""
    cfg = BenchConfig.model_validate(settings["bench"])
    scenario = cell_scenario(cfg, side)
    cell = CellSpec(grid_label(side, cfg.controller, scenario.run.fusion), scenario, side)
    result = run_cell(cfg, cell, progress=False)
    try:
        stats = cell_asymptotic_error(result, cfg.entropy_threshold)
        e_inf, frac = stats.e_inf, stats.qualify_frac
    except NoQualifyingTrials as e:
        context.log.warning(str(e))
        e_inf, frac = float("nan"), 0.0
    context.log.info(f"{cell.label}: e_inf = {e_inf:.3f} m, qualifying = {frac:.0%}")
    TABLE_CELLS_DONE.inc()
    return {
        "row": {"M": side * side, "spacing_m": result.spacing, "e_inf_m": e_inf, "qualify_frac": frac},
        "label": cell.label,
        "curve": result.curve_frame().to_dict(orient="list"),
    }


@op
def write_table(context: OpExecutionContext, cells: List[Dict], settings: Dict) -> str:
    """Write table1.csv (sorted by M) and one curve file per cell."""
    out_dir = Path(settings["out_dir"])
    for cell in cells:
        write_frame(pd.DataFrame(cell["curve"]), out_dir / f"curves_{cell['label']}.csv")
    table = pd.DataFrame([c["row"] for c in cells]).sort_values("M").reset_index(drop=True)
    path = write_frame(table, out_dir / "table1.csv")
    context.log.info(f"Wrote {len(table)} rows to {path}")
    return str(path)
