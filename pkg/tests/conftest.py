import os

import pytest
from hypothesis import HealthCheck, settings

from pulsar_green import ColumnParams

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# Acceptance lines collected by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def fig1a() -> ColumnParams:
    """Column used for the reference spectra: beta = 0.3, injection at (0.5, 0.1)."""
    return ColumnParams(ndot0=1.0, t_e=1e7, r0=1e4, alpha=0.1, xi=1.5, beta=0.3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
