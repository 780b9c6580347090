import hypothesis
import numpy as np
import pytest

from grasplab.graph import EdgeList

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=50, deadline=None)
hypothesis.settings.load_profile("dev")

# lines recorded by test_acceptance, echoed after the run regardless of capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def four_vertex_edges():
    return EdgeList.from_pairs(4, [(0, 1), (0, 2), (1, 2), (2, 3)])


def random_edges(rng: np.random.Generator, n: int, m: int) -> EdgeList:
    return EdgeList(n, rng.integers(0, n, m), rng.integers(0, n, m))
