import numpy as np
import pytest

from beamsched.config import SystemConfig
from beamsched.utility import Scenario


@pytest.fixture
def config():
    return SystemConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def scenario(config):
    return Scenario.generate(config, np.random.default_rng(7))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
