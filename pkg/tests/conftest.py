"""Shared oracles: plain-Python Fraction arithmetic, independent of the numpy code paths."""

from fractions import Fraction

import pytest


def frac_matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m)] for i in range(n)]


def frac_identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def as_fractions(g):
    """Nested Fraction lists from a WeightedGraph or DyadicMatrix."""
    w = getattr(g, "weights", g)
    return [[Fraction(x) for x in row] for row in w.to_fractions().tolist()]


def hankel_oracle(blocks, m):
    """Expand by the definition: block (i, j) = blocks[i + j]."""
    K = (len(blocks) + 1) // 2
    out = [[Fraction(0)] * (K * m) for _ in range(K * m)]
    for i in range(K):
        for j in range(K):
            b = blocks[i + j]
            for s in range(m):
                for t in range(m):
                    out[i * m + s][j * m + t] = Fraction(b[s][t])
    return out


@pytest.fixture
def oracles():
    class O:
        matmul = staticmethod(frac_matmul)
        identity = staticmethod(frac_identity)
        fractions = staticmethod(as_fractions)
        hankel = staticmethod(hankel_oracle)
    return O


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
