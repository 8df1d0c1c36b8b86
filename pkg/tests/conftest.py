import math

import numpy as np
import pytest
from hypothesis import settings

from pressurelab import LocallyConstant, SftSystem

settings.register_profile("pkg", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("pkg")

GOLDEN_P = math.log((1 + math.sqrt(5)) / 2)
BETA1_P = math.log(1 + math.e)


@pytest.fixture
def full():
    return SftSystem.full_shift(2, 0.5)


@pytest.fixture
def golden():
    return SftSystem.golden_mean(0.5)


@pytest.fixture
def zero2():
    return LocallyConstant.zero(2)


@pytest.fixture
def beta1():
    return LocallyConstant(2, 1, [0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1][len("test_"):]
        _CRITERIA[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for name in sorted(_CRITERIA, key=lambda k: int(k.split("_")[1])):
            terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
