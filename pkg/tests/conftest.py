import numpy as np
import pytest

from qubit_metrology.channel import ChannelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_params(rng, omega=False) -> ChannelParams:
    """A uniformly drawn completely positive parameter set."""
    g1 = rng.uniform(0, 2)
    return ChannelParams(
        gamma1=g1,
        gamma2=g1 / 2 + rng.uniform(0, 2),
        mu=rng.uniform(-1, 1),
        omega=rng.uniform(-3, 3) if omega else 0.0,
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
