import numpy as np
import pytest
from scipy.sparse.csgraph import connected_components

from signedblock.graphcore import unsigned_adjacency
from signedblock.models import ProbabilityMatrix
from signedblock.sampler import Seed, SignedGraph, sample

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line; all lines are reprinted in the terminal summary."""

    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        print(line)
        _CRITERIA.append(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


def graph(n, edges):
    return SignedGraph.from_edges(n, edges)


@pytest.fixture
def triangle_one_negative():
    return graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, -1)])


@pytest.fixture
def balanced_k4():
    # + inside {0,1} and {2,3}, - across
    return graph(4, [(0, 1, 1), (2, 3, 1), (0, 2, -1), (0, 3, -1), (1, 2, -1), (1, 3, -1)])


def homogeneous(n, p, s):
    P = np.full((n, n), p)
    S = np.full((n, n), s)
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(S, 0.0)
    return ProbabilityMatrix(P), ProbabilityMatrix(S)


def is_connected(g):
    if g.num_edges == 0:
        return g.n == 1
    return connected_components(unsigned_adjacency(g), directed=False)[0] == 1


def random_connected_graphs(count, n_range, p_grid, s_grid, master):
    """Connected homogeneous signed ER graphs cycling over the (p, s) grid.

    Disconnected draws are discarded and redrawn with the next trial index.
    Returns (graphs, discarded).
    """
    rng = np.random.default_rng(master)
    cells = [(p, s) for p in p_grid for s in s_grid]
    out, trial, discarded = [], 0, 0
    while len(out) < count:
        p, s = cells[len(out) % len(cells)]
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        while True:
            g = sample(*homogeneous(n, p, s), Seed(master, trial))
            trial += 1
            if is_connected(g):
                break
            discarded += 1
        out.append(g)
    return out, discarded
