import numpy as np
import pytest

from genround import DistanceMatrix

FOUR_CYCLE = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]
TRIANGLE = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


@pytest.fixture
def four_cycle():
    return DistanceMatrix(FOUR_CYCLE)


@pytest.fixture
def triangle():
    return DistanceMatrix(TRIANGLE)


@pytest.fixture
def two_point():
    return DistanceMatrix([[0, 1], [1, 0]])


def random_metric(rng, n):
    """Random finite metric: either sup-norm points or entries in [1, 2]."""
    if rng.random() < 0.5:
        pts = rng.uniform(-1, 1, size=(n, 3))
        d = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
    else:
        a = rng.uniform(1, 2, size=(n, n))
        d = np.triu(a, 1)
        d = d + d.T
    return DistanceMatrix(d)


# -- acceptance summary --------------------------------------------------------

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "test_criterion_" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
