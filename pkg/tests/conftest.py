import numpy as np
import pytest

from flexjrc.config import SystemConfig

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def cfg():
    return SystemConfig()


@pytest.fixture
def small_cfg():
    return SystemConfig(n_tx=8, n_rx=2, n_rf=4, n_clusters=3, n_targets=2)


def random_complex(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
