import sys
import random

import pytest

from persinv import GridBox, PersistenceModule, interval_module, module_from_cubes
from persinv.grid import CubeSpec


@pytest.fixture
def two_bars():
    """C[0,2] + C[1,3] on the line."""
    return module_from_cubes(1, [(CubeSpec((0,), (2,)), 1), (CubeSpec((1,), (3,)), 1)])


@pytest.fixture
def l_shape():
    """Interval module on {(0,0), (1,0), (0,1)}."""
    box = GridBox((0, 0), (1, 1))
    return interval_module(box, [(0, 0), (1, 0), (0, 1)])


@pytest.fixture
def broken_square():
    """All dims 1 on {0,1}^2; the square fails to commute."""
    box = GridBox((0, 0), (1, 1))
    dims = {v: 1 for v in box.points()}
    maps = {
        ((0, 0), 0): [[1]],
        ((0, 0), 1): [[1]],
        ((1, 0), 1): [[1]],
        ((0, 1), 0): [[2]],
    }
    return PersistenceModule(box, dims, maps)


@pytest.fixture
def rng():
    return random.Random(20261019)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
