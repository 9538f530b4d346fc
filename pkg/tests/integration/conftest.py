"""Integration test configuration and fixtures."""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
project_root = str(Path(__file__).parent.parent.parent)
if project_root not in sys.path:
    sys.path.append(project_root)

from validators.schema import ScenarioConfig

# Source on a 5 m grid centre, four static agents at 10 m on the axes around it.
CROSS_SOURCE = (2.5, 2.5)
CROSS_AGENTS = [(12.5, 2.5), (2.5, 12.5), (-7.5, 2.5), (2.5, -7.5)]


@pytest.fixture
def cross_scenario():
    """Static four-agent scenario with the source on a centre of a 20 x 20 grid."""
    return ScenarioConfig().updated(
        grid={"side": 20},
        agents={"positions": CROSS_AGENTS},
        control={"enabled": False},
        timing={"delay": 0.0},
        run={"source": CROSS_SOURCE, "k_max": 2000},
    )


@pytest.fixture
def cross_source():
    return CROSS_SOURCE


@pytest.fixture
def cross_xs():
    return np.asarray(CROSS_AGENTS, dtype=float)


@pytest.fixture
def tiny_scenario_file(tmp_path):
    path = tmp_path / "tiny.yaml"
    path.write_text("grid:\n  side: 10\nrun:\n  k_max: 40\n")
    return path
