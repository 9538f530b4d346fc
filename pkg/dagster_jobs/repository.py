"""Dagster repository definition."""
from dagster import repository

from dagster_jobs.jobs.error_table import error_table_job


@repository
def binloc_repository():
    """Repository containing the benchmark jobs."""
    return [error_table_job]
