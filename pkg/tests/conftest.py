from fractions import Fraction

import pytest

from tgp.geometry import validate_terrain

PEAK = [(0, 0), (1, 1), (2, 0)]
W_TERRAIN = [(0, 1), (1, 0), (2, 1), (3, 0), (4, 1)]
# two mountains around a flat bottom edge (3) with a lower peak before each
BASIN = [(0, 12), (2, 5), (6, 5), (8, 0), (14, 0), (18, 6), (20, 2), (23, 13)]


@pytest.fixture
def peak():
    return validate_terrain(PEAK)


@pytest.fixture
def w_terrain():
    return validate_terrain(W_TERRAIN)


@pytest.fixture
def single_edge():
    return validate_terrain([(0, 0), (4, 2)])


@pytest.fixture
def basin():
    return validate_terrain(BASIN)


def frac(s):
    return Fraction(s)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
