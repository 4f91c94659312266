import math

import numpy as np
import pytest

from starspec import broken_line_graph, symmetric_graph

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def six_alternating():
    return symmetric_graph(6, [1, -1, 1, 1, -1, 1])


@pytest.fixture
def three_strong():
    return symmetric_graph(3, [4, 4, 4])


@pytest.fixture
def zero_mode_graph():
    return broken_line_graph(1.0, -4.0, 1.0)


@pytest.fixture
def ray_graph():
    return broken_line_graph(1.0, 0.0, math.pi / 3)


def random_graph(rng, n=None, symmetric=False, margin=0.25):
    """Random valid graph with strengths in [-5, 5] kept ``margin`` away from +-2."""
    n = n or int(rng.integers(2, 7))
    taus = []
    while len(taus) < n:
        t = rng.uniform(-5, 5)
        if abs(abs(t) - 2.0) > margin:
            taus.append(t)
    if symmetric:
        return symmetric_graph(n, taus)
    w1 = rng.uniform(0.15, 2.0 * math.pi / n)
    inner = np.sort(rng.uniform(w1, 2.0 * math.pi - w1, n - 2))
    while n > 2 and (np.min(np.diff(np.concatenate(([w1], inner, [2 * math.pi - w1])))) < 0.05):
        inner = np.sort(rng.uniform(w1, 2.0 * math.pi - w1, n - 2))
    from starspec import validate
    return validate(n, np.concatenate(([w1], inner)), taus)
