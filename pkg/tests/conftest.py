import numpy as np
import pytest


@pytest.fixture
def rs():
    return np.random.default_rng(12345)


_AC_LINES = []


@pytest.fixture
def ac_report():
    """Collects one summary line per acceptance criterion."""
    return _AC_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _AC_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _AC_LINES:
            terminalreporter.write_line(line)
