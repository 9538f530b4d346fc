"""Job reproducing the asymptotic-error table."""
from dagster import job

from dagster_jobs.ops.error_table import bench_settings, grid_sides, run_grid_cell, write_table


@job
def error_table_job():
    """Fan grid sides out, run every cell, then write the table."""
    settings = bench_settings()
    cells = grid_sides(settings).map(lambda side: run_grid_cell(side, settings))
    write_table(cells.collect(), settings)
