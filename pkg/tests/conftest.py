import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion's outcome for the summary table."""
    name = request.node.get_closest_marker("criterion").args[0]
    entry = {"name": name, "passed": False}
    _CRITERIA.append(entry)
    yield entry


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        for entry in _CRITERIA:
            if entry["name"] == marker.args[0]:
                entry["passed"] = report.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _CRITERIA:
        mark = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"[{mark}] {entry['name']}")
