import itertools

import numpy as np
import pytest

from fairrank.harness import TightParams, gen_tight

ACCEPTANCE_LINES: list[str] = []


def brute_kendall(a, b):
    """Disagreeing unordered pairs, straight from the definition."""
    a, b = tuple(a), tuple(b)
    pa = {v: i for i, v in enumerate(a)}
    pb = {v: i for i, v in enumerate(b)}
    return sum(
        1 for x, y in itertools.combinations(sorted(pa), 2)
        if (pa[x] < pa[y]) != (pb[x] < pb[y])
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tight11():
    return gen_tight(TightParams(1, 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
