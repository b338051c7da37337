import numpy as np
import pytest
from hypothesis import settings

from fogreduce import TimeSeries

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20190601)


def make_series(values, step=1800, start=0, variable="x", unit=""):
    values = np.asarray(values, dtype=float)
    return TimeSeries(variable, start + step * np.arange(values.size), values, unit)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
