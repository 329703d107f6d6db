import math

import pytest

from pesmc.core import PhysicalParams

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def fig1_params():
    return PhysicalParams(gamma=0.25, rho=1.0 / 3.0, alpha=0.25, beta=0.5)


@pytest.fixture
def record():
    """Collect one pass/fail line per acceptance criterion for the terminal summary."""

    def _record(name: str, passed: bool, detail: str):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


def rel(a, b):
    return abs(a - b) / max(abs(b), math.ulp(1.0))
