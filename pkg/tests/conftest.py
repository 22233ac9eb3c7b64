import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "packages"))
sys.path.insert(0, str(ROOT / "apps"))

from fdesic.cancopt import SolverOptions  # noqa: E402
from fdesic.sichan import benchmark_channel  # noqa: E402


@pytest.fixture(scope="session")
def benchmark():
    return benchmark_channel()


@pytest.fixture(scope="session")
def band_20mhz(benchmark):
    return benchmark.restrict(benchmark.grid.center_hz, 20e6)


@pytest.fixture
def quick_opts():
    return SolverOptions(restarts=3, max_iterations=400, seed=0)
