import numpy as np
import pytest

from twisted_chn import ModelParams

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[(1, 1.0), (2, 0.5), (3, 3.0)], ids=lambda nc: f"n{nc[0]}-c{nc[1]:g}")
def params(request):
    n, c = request.param
    return ModelParams(n, c)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
