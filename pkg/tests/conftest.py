import numpy as np
import pytest

from dampedosc.coeffs import ModelParams


@pytest.fixture
def params():
    return ModelParams(0.2, 0.1, 1.0)


@pytest.fixture
def vacuum40():
    rho = np.zeros((40, 40), complex)
    rho[0, 0] = 1.0
    return rho


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
