import numpy as np
import pytest

ACCEPTANCE_LINES = []


def brute_conv2d(x, w, s=1):
    """Four nested Python loops over plain ints; independent of numpy slicing."""
    x = [[int(v) for v in row] for row in np.asarray(x)]
    w = [[int(v) for v in row] for row in np.asarray(w)]
    n, k = len(x), len(w)
    m = (n - k) // s + 1
    out = [[0] * m for _ in range(m)]
    for r in range(m):
        for c in range(m):
            acc = 0
            for i in range(k):
                for j in range(k):
                    acc += x[r * s + i][c * s + j] * w[i][j]
            out[r][c] = acc
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
