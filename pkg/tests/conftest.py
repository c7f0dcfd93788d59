import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("feq", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("feq")


@pytest.fixture
def rng():
    return random.Random(1234)


CRITERION_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERION_LINES):
            terminalreporter.write_line(CRITERION_LINES[k])
