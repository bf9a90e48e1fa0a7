import numpy as np
import pytest

from g3vortex.grid import GridSpec


@pytest.fixture(scope="session")
def grid():
    return GridSpec(256, 40.0)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(64, 2 * np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Record and print one verdict line (``passed=None`` marks information only).

    The lines are repeated in the terminal summary.
    """

    def report(label: str, passed, detail: str):
        verdict = "INFO" if passed is None else ("PASS" if passed else "FAIL")
        line = f"{label} {verdict}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
