import pytest

from ecqubo.graph import builtin

# Every builtin instance with n <= 20: the published graphs whose topology is
# known, plus the small fixtures used throughout the tests.
ROSTER = [
    ("bull", ()),
    ("complete_bipartite", (3, 5)),
    ("complete", (5,)),
    ("sedgewick_maze", ()),
    ("florentine_families", ()),
    ("g8_spider", ()),
    ("complete", (3,)),
    ("complete", (4,)),
    ("path", (3,)),
    ("path", (7,)),
    ("star", (5,)),
]


def roster(max_n=20):
    graphs = [builtin(name, params) for name, params in ROSTER]
    return [g for g in graphs if g.n <= max_n]


ACCEPTANCE_LINES = {}


def record_acceptance(key, ok, detail):
    ACCEPTANCE_LINES[key] = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"


@pytest.fixture
def g8():
    return builtin("g8_spider")


@pytest.fixture
def p3():
    return builtin("path", [3])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
