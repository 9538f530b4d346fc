"""Scenario configuration: schema, loader and consistency checks."""

from .quality import ScenarioChecker
from .schema import ScenarioConfig, dump_config, load_config_text, parse_config

__all__ = ['ScenarioChecker', 'ScenarioConfig', 'dump_config', 'load_config_text', 'parse_config']
