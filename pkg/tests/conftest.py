from itertools import combinations_with_replacement

import pytest

from sumset_lab import kernels

BACKEND_NAMES = sorted(kernels.BACKENDS)


@pytest.fixture(params=BACKEND_NAMES)
def backend(request):
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def brute_hA(A, h):
    """hA by summing every h-multiset directly: the independent oracle."""
    g = A.group
    out = set()
    for combo in combinations_with_replacement(A.elements, h):
        s = [0] * g.dim
        for p in combo:
            s = [x + y for x, y in zip(s, p)]
        out.add(g.canonical(s))
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
