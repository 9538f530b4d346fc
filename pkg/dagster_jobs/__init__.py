"""Dagster orchestration for the Monte Carlo error table."""
