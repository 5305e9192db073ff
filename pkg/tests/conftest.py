import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qpagerank.graph import DirectedGraph, generate_scale_free  # noqa: E402
from qpagerank.google import google_matrix  # noqa: E402
from oracles import random_graph_edges  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_node():
    return DirectedGraph(2, ((0, 1),))


@pytest.fixture
def graph32():
    return generate_scale_free(32, 2, 7)


@pytest.fixture
def small_graphs():
    r = np.random.default_rng(99)
    out = []
    for n in (3, 4, 5, 6):
        out.append(DirectedGraph(n, tuple(random_graph_edges(r, n))))
    return out


@pytest.fixture
def G6():
    return google_matrix(generate_scale_free(6, 2, 3))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" not in props:
                continue
            status = "PASS" if rep.passed else "FAIL"
            lines.append((props["criterion"], status, props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for crit, status, detail in sorted(lines):
        terminalreporter.write_line(f"[{status}] AC{crit:>2}: {detail}")
