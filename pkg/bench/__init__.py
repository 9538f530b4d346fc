"""Monte Carlo benchmarks: grid estimator, SIR baseline and envelope sweep."""
from bench.envelope import envelope_cells, envelope_label, envelope_sweep
from bench.harness import (
    BenchConfig,
    BenchResult,
    CellResult,
    CellSpec,
    asymptotic_error,
    cell_asymptotic_error,
    cell_scenario,
    default_cells,
    grid_label,
    monte_carlo,
    table_one,
    trial_seed,
)
from bench.sir import ParticleFusionCentre, particle_fusion, sir_baseline

__all__ = [
    "BenchConfig",
    "BenchResult",
    "CellResult",
    "CellSpec",
    "ParticleFusionCentre",
    "asymptotic_error",
    "cell_asymptotic_error",
    "cell_scenario",
    "default_cells",
    "envelope_cells",
    "envelope_label",
    "envelope_sweep",
    "grid_label",
    "monte_carlo",
    "particle_fusion",
    "sir_baseline",
    "table_one",
    "trial_seed",
]
