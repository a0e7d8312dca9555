import os
import logging
import numpy as np
import pytest

pytest_plugins = [
    "tests.fixtures.image_fixtures",
    "tests.fixtures.point_cloud_fixtures",
    "tests.fixtures.simulator_fixtures",
    "tests.fixtures.pipeline_fixtures",
]

logger = logging.getLogger(__name__)

# Keep diagnostics quiet unless a test run asks for them
os.environ.setdefault("ENV", "test")
os.environ.setdefault("LOG_LEVEL", "WARNING")


@pytest.fixture(scope="function")
def rng():
    """Seeded random generator so every test sees the same data."""
    return np.random.default_rng(20240611)


def pytest_collection_modifyitems(config, items):
    """Skip wall-clock benchmarks unless TACSHADE_RUN_BENCHMARKS=1."""
    if os.environ.get("TACSHADE_RUN_BENCHMARKS") == "1":
        return
    skip_benchmark = pytest.mark.skip(reason="set TACSHADE_RUN_BENCHMARKS=1 to run")
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip_benchmark)
