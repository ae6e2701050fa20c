from fractions import Fraction

import pytest

from repairloop.model import CtmcModel

ACCEPTANCE_LINES = []


def exact_stationary(states, transitions):
    """Stationary vector of a closed chain by rational Gauss-Jordan elimination.

    Independent of the library: takes plain ``(from, to, rate)`` triples and
    works in ``Fraction`` arithmetic throughout.
    """
    n = len(states)
    pos = {s: i for i, s in enumerate(states)}
    q = [[Fraction(0)] * n for _ in range(n)]
    for a, b, r in transitions:
        q[pos[a]][pos[b]] += Fraction(r)
        q[pos[a]][pos[a]] -= Fraction(r)
    # rows: balance equations pi Q = 0 (columns of Q), last replaced by sum = 1
    m = [[q[j][i] for j in range(n)] + [Fraction(0)] for i in range(n)]
    m[-1] = [Fraction(1)] * n + [Fraction(1)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        m[c] = [v / m[c][c] for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


@pytest.fixture
def single():
    return CtmcModel.from_edges(["s0", "s1"], "s0", [("s0", "s1", 2.0)])


@pytest.fixture
def series():
    return CtmcModel.from_edges(["s0", "s1", "s2"], "s0",
                                [("s0", "s1", 1.0), ("s1", "s2", 2.0)])


@pytest.fixture
def competing():
    return CtmcModel.from_edges(["s0", "s1", "s2"], "s0",
                                [("s0", "s1", 1.0), ("s0", "s2", 3.0)])


@pytest.fixture
def trapped():
    return CtmcModel.from_edges(
        ["s0", "s1", "s2", "s3", "s4"], "s0",
        [("s0", "s1", 1), ("s1", "s0", 1), ("s0", "s2", 1),
         ("s0", "s3", 1), ("s3", "s4", 1), ("s4", "s3", 1)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
