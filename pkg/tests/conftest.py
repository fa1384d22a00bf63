import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from spreadsim import backend
from spreadsim.graph import Graph


# pass/fail lines registered by the acceptance suite, echoed after the run
# so they stay visible under output capture
ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if (report.when == "call" and report.failed
            and item.fspath.basename == "test_acceptance.py"):
        ACCEPTANCE_LINES.append(f"[acceptance] {item.name}: FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    previous = backend.active_name()
    backend.set_backend(request.param)
    yield request.param
    backend.set_backend(previous)


def build_graph(edges, n=None, directed=False):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if edges.size else 0
    return Graph.from_edges(n, edges[:, 0], edges[:, 1], directed=directed)


def star_graph(leaves):
    return build_graph([(0, i) for i in range(1, leaves + 1)])


def path_graph(n):
    return build_graph([(i, i + 1) for i in range(n - 1)], n=n)


def cycle_graph(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)], n=n)


def complete_graph(n):
    return build_graph([(i, j) for i in range(n) for j in range(i + 1, n)],
                       n=n)


def adjacency_of(graph):
    return {u: list(graph.neighbors(u)) for u in range(graph.node_count)}
