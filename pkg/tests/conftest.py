import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bcpaths.geometry import DirectedPoint

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coord = st.floats(-6, 6, allow_nan=False, allow_infinity=False)
heading = st.floats(-math.pi, math.pi, allow_nan=False, exclude_min=True)
directed_points = st.builds(DirectedPoint, coord, coord, heading)
steps = st.lists(st.tuples(st.sampled_from("LRS"), st.floats(0.05, 3.0)), min_size=1, max_size=6)
rigid_motions = st.tuples(st.floats(-math.pi, math.pi), st.floats(-5, 5), st.floats(-5, 5))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def verdict(request):
    """Records one PASS/FAIL line per acceptance criterion and fails the test on FAIL."""
    lines = request.config._acceptance_lines

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines):
            terminalreporter.write_line(line)
