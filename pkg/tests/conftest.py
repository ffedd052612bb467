import random
from fractions import Fraction

import pytest
from hypothesis import settings

from graphexplore.core import Graph

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

# verdict lines queued by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_connected_graph(rng: random.Random, n: int, extra: int, denom: int = 16) -> Graph:
    """Random-tree skeleton plus `extra` chords; weights k/denom in [1, 3]."""

    def w():
        return Fraction(rng.randint(denom, 3 * denom), denom)

    edges = [(rng.randrange(i), i, w()) for i in range(1, n)]
    seen = {(min(u, v), max(u, v)) for u, v, _ in edges}
    tries = 0
    while extra > 0 and tries < 50 * (extra + 1):
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        edges.append((u, v, w()))
        extra -= 1
    return Graph(n, edges)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
