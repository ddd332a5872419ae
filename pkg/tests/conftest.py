import functools

import pytest

from grasscluster.cluster import explore
from grasscluster.combinatorics import build_initial_seed

CRITERIA = []


@functools.lru_cache(maxsize=None)
def _explored(k, n):
    return explore(build_initial_seed(k, n))


@pytest.fixture(scope="session")
def explored():
    """Closed exploration of G(k, n) from the A_{k,n} seed, shared across tests."""
    return _explored


@pytest.fixture
def criterion(capsys):
    """Record and print one acceptance line: criterion(number, passed, text)."""

    def record(number, passed, text):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}"
        CRITERIA.append(line)
        with capsys.disabled():
            print("\n" + line)

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
