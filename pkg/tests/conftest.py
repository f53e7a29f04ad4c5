import numpy as np
import pytest

from bo_birkhoff.fourier import RealPotential, random_smooth

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def smooth_u(rng):
    return random_smooth(64, rng, norm=0.3)


@pytest.fixture
def cos_pair():
    # 0.2 (2 cos x) + 0.1 (2 cos 2x)
    return RealPotential.cosine(1, 0.4, 64) + RealPotential.cosine(2, 0.2, 64)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
