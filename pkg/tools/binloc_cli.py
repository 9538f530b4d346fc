#!/usr/bin/env python3
"""
Command-line entry point for localisation runs, benchmarks and diagnostics.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from prometheus_client import start_http_server
from pydantic import ValidationError

from bench.envelope import envelope_sweep
from bench.harness import BenchConfig, asymptotic_error, monte_carlo, table_one
from design.geometry import design_geometry
from detection.registry import FriisSpec, RangeSpec, build_model
from diagnostics.ambiguity import ambiguity_set_A, candidate_grid
from diagnostics.bounds import ratio_bounds
from diagnostics.divergence import minimiser_set_B
from diagnostics.envelope import envelope_minimiser_set
from reports.csv_export import write_curves, write_frame, write_kl_report, write_trace
from simulation.engine import fusion_model, run_scenario
from theory.products import ProductExperiment, cesaro_table, tail_table
from utils.env import get_env_var, get_log_level, load_env
from utils.errors import BinlocError, ConfigError
from validators.schema import ScenarioConfig, parse_config

logger = logging.getLogger("binloc")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

THEORY_HORIZONS = [25, 50, 100, 200, 400]
THEORY_EPS = [1.0, 0.1]
CESARO_HORIZONS = [1_000, 10_000, 100_000]


def _floats(text: str, count: Optional[int] = None) -> List[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")
    if count is not None and len(values) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers, got '{text}'")
    return values


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def _pair(text: str) -> Tuple[float, float]:
    return tuple(_floats(text, 2))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Scenario YAML file (defaults to the built-in scenario)")
    common.add_argument("--seed", type=int, default=0, help="Seed (master seed for bench)")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for Monte Carlo trials")
    common.add_argument("--out-dir", type=Path, default=Path("out"), help="Directory for CSV output")
    common.add_argument("--metrics-port", type=int, help="Expose Prometheus metrics on this port")

    parser = argparse.ArgumentParser(prog="binloc", description="Bayesian source localisation from binary detections")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="Run one closed-loop trace")
    sim.add_argument("--k-max", type=int, help="Override the number of measurements")
    sim.add_argument("--fusion", choices=["grid", "sir"], help="Override the fusion method")
    sim.add_argument("--particles", type=int, help="SIR particle count")

    bench = sub.add_parser("bench", parents=[common], help="Monte Carlo error tables and curves")
    bench.add_argument("--grids", type=_ints, default=[10, 20, 30, 40, 50], help="Grid sides, e.g. 10,20,30")
    bench.add_argument("--trials", type=int, default=100)
    bench.add_argument("--k-max", type=int, default=1000)
    bench.add_argument("--threshold", type=float, default=1.0, help="Entropy threshold for e_inf, nats")
    bench.add_argument("--no-controller", action="store_true", help="Keep agents at their initial positions")
    bench.add_argument("--baseline", choices=["none", "sir"], default="none")
    bench.add_argument("--envelope-sweep", type=_floats, help="True P_T values, e.g. 1,2,3,4,5")
    bench.add_argument("--assumed-pt", type=float, default=5.0)

    dopt = sub.add_parser("doptimal", parents=[common], help="D-optimal formation for a detection model")
    dopt.add_argument("--model", choices=["friis", "exponential", "config"], default="config")
    dopt.add_argument("--n", type=int, help="Number of agents (defaults to the scenario's)")
    dopt.add_argument("--r-range", type=_pair, default=(5.0, 20.0), help="Radius interval r1,r2 in metres")
    dopt.add_argument("--anchor", type=_pair, default=(0.0, 0.0), help="Estimated source x,y")

    diag = sub.add_parser("diagnose", parents=[common], help="KL report and sets A/B for a frozen scenario")
    diag.add_argument("--source", type=_pair, help="Source x,y (defaults to run.source or the region centre)")
    diag.add_argument("--tol", type=float, default=1e-6, help="Tolerance for the set A proxy")
    diag.add_argument("--candidates", type=int, default=200, help="Candidate lattice side for set A")

    theory = sub.add_parser("theory", parents=[common], help="Product-tail and Cesaro drift suites")
    theory.add_argument("--trials", type=int, default=10_000)
    theory.add_argument("--seeds", type=int, default=100, help="Paths for the Cesaro drift table")
    return parser


def cmd_simulate(args, cfg: ScenarioConfig) -> int:
    run = {}
    if args.k_max is not None:
        run["k_max"] = args.k_max
    if args.fusion is not None:
        run["fusion"] = args.fusion
    if args.particles is not None:
        run["particles"] = args.particles
    if run:
        cfg = cfg.updated(run=run)
    trace = run_scenario(cfg, args.seed)
    write_trace(trace, args.out_dir, tag=f"seed{args.seed}")
    print(f"source = ({trace.source[0]:.3f}, {trace.source[1]:.3f}) m")
    print(f"k = {trace.epochs[-1].k}, error = {trace.final_error:.3f} m, entropy = {trace.final_entropy:.3f} nats")
    return EXIT_OK


def cmd_bench(args, cfg: ScenarioConfig) -> int:
    bench_cfg = BenchConfig(
        grids=args.grids,
        trials=args.trials,
        k_max=args.k_max,
        entropy_threshold=args.threshold,
        master_seed=args.seed,
        controller=not args.no_controller,
        baseline=args.baseline,
        envelope=args.envelope_sweep,
        assumed_pt=args.assumed_pt,
        jobs=args.jobs,
        scenario=cfg,
    )
    if bench_cfg.envelope:
        result = envelope_sweep(bench_cfg, bench_cfg.assumed_pt, bench_cfg.envelope)
        write_curves(result, args.out_dir)
        rows = [{"true_pt_w": pt, "k": c.ks[-1], "rms_m": c.rms[-1]} for pt, c in zip(bench_cfg.envelope, result.cells)]
        frame = pd.DataFrame(rows)
        write_frame(frame, args.out_dir / "envelope.csv")
        print(frame.to_string(index=False))
        return EXIT_OK

    result = monte_carlo(bench_cfg)
    write_curves(result, args.out_dir)
    table = table_one(result)
    write_frame(table, args.out_dir / "table1.csv")
    print(table.to_string(index=False))
    if bench_cfg.baseline == "sir":
        for label, stats in asymptotic_error(result, float("inf")).items():
            print(f"{label}: RMS at k_max = {stats.e_inf:.3f} m")
    return EXIT_OK


def _doptimal_model(choice: str, cfg: ScenarioConfig):
    if choice == "friis":
        return build_model(cfg.model if isinstance(cfg.model, FriisSpec) else FriisSpec())
    if choice == "exponential":
        return build_model(RangeSpec())
    return fusion_model(cfg)


def cmd_doptimal(args, cfg: ScenarioConfig) -> int:
    n = args.n or cfg.n_agents
    model = _doptimal_model(args.model, cfg)
    spec = design_geometry(args.anchor, n, model.range_profile(), tuple(args.r_range))
    positions = spec.positions()
    frame = pd.DataFrame({
        "agent": np.arange(n),
        "theta_rad": spec.angles,
        "x": positions[:, 0],
        "y": positions[:, 1],
    })
    write_frame(frame, args.out_dir / "geometry.csv")
    print(f"model = {model.describe()}, radius = {spec.radius:.4f} m, residual = {spec.residual()}")
    print(frame.to_string(index=False))
    return EXIT_OK


def cmd_diagnose(args, cfg: ScenarioConfig) -> int:
    source = args.source or cfg.run.source or tuple(cfg.region.box().centre)
    xs = np.asarray(cfg.agents.positions, dtype=float)
    cs = cfg.centres()
    true_m = build_model(cfg.model)
    report = minimiser_set_B(source, xs, cs, true_m)
    write_kl_report(report, args.out_dir / "kl_report.csv")
    candidates = candidate_grid(cfg.grid.box(), args.candidates)
    members = ambiguity_set_A(source, xs, candidates, true_m, args.tol)
    write_frame(pd.DataFrame(members, columns=["x", "y"]), args.out_dir / "ambiguity.csv")
    bounds = ratio_bounds(cs, xs, source, true_m)
    print(f"source = {tuple(float(v) for v in source)}, B = {sorted(report.as_set())}, min K = {report.minimum:.4e} nats")
    print(f"|A proxy| = {len(members)} of {len(candidates)} candidates at tol {args.tol:g}")
    print(f"ell0 = {bounds.ell0:.4e}, ell1 = {bounds.ell1:.6f}, alpha = {bounds.alpha:.4e}, beta = {bounds.beta:.4e}")
    if cfg.envelope is not None:
        env_report = envelope_minimiser_set(source, xs, cs, true_m, build_model(cfg.envelope))
        write_kl_report(env_report, args.out_dir / "kl_report_envelope.csv")
        print(f"B(true | envelope) = {sorted(env_report.as_set())}")
    return EXIT_OK


def cmd_theory(args, cfg: ScenarioConfig) -> int:
    exp = ProductExperiment(trials=args.trials)
    tails = tail_table(exp, THEORY_EPS, THEORY_HORIZONS, args.seed)
    write_frame(tails, args.out_dir / "theory_tail.csv")
    drift = cesaro_table("uniform", 0.75, CESARO_HORIZONS, args.seeds)
    write_frame(drift, args.out_dir / "theory_cesaro.csv")
    print(tails.to_string(index=False))
    rms = drift.groupby("n")["drift"].apply(lambda v: float(np.sqrt(np.mean(v ** 2))))
    print("Cesaro drift RMS by horizon: " + ", ".join(f"n={n}: {v:.4f}" for n, v in rms.items()))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "doptimal": cmd_doptimal,
    "diagnose": cmd_diagnose,
    "theory": cmd_theory,
}


def main(argv: Optional[list] = None) -> int:
    load_env()
    logging.basicConfig(level=get_log_level(), format="%(asctime)s %(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)

    port = args.metrics_port or get_env_var("BINLOC_METRICS_PORT", required=False)
    if port:
        start_http_server(int(port))
        logger.info(f"Serving metrics on port {port}")

    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        cfg = parse_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, ValidationError) as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BinlocError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
