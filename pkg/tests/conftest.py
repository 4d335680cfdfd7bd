import numpy as np
import pytest

from fqsimplex.io import sample_set

ACCEPTANCE_RESULTS = {}


def record(criterion, passed, detail=""):
    ACCEPTANCE_RESULTS[criterion] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        passed, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {name} {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def random_set():
    def make(q, d, density, seed):
        return sample_set(q, d, density, seed)

    return make
