import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ctrlmode.digraph import DiGraph

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def random_digraph(rng: random.Random, n: int, p: float, loops: bool = False) -> DiGraph:
    edges = [(u, v) for u in range(n) for v in range(n) if (loops or u != v) and rng.random() < p]
    return DiGraph.from_edges(n, edges)


@st.composite
def small_digraphs(draw, min_n=1, max_n=8, loops=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return DiGraph.from_edges(n, edges)


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line and assert it."""

    def report(name: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
