import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from g2strom.g2 import standard_g2_form
from g2strom.lie import su2, trivial

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def g2():
    return standard_g2_form()


@pytest.fixture(scope="session")
def su2_alg():
    return su2()


@pytest.fixture(scope="session")
def trivial_alg():
    return trivial()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
