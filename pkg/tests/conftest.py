import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_acceptance: dict[str, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return random.Random(20240607)


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        doc = getattr(report, "acceptance_doc", "") or report.nodeid.split("::")[-1]
        _acceptance[report.nodeid] = (report.outcome.upper(), doc)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    doc = (item.function.__doc__ or "").strip().splitlines()
    label = doc[0] if doc else item.name
    if hasattr(item, "callspec"):
        label += f" [{item.callspec.id}]"
    rep.acceptance_doc = label


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, doc in _acceptance.values():
        terminalreporter.write_line(f"{'PASS' if outcome == 'PASSED' else 'FAIL'}  {doc}")
