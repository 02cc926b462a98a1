import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable


def pytest_configure(config):
    config._criterion_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    num, title = marker.args
    slot = item.config._criterion_results.setdefault(
        num, {"title": title, "failed": False, "ran": 0}
    )
    slot["ran"] += 1
    if report.outcome == "failed":
        slot["failed"] = True


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_criterion_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        slot = results[num]
        verdict = "FAIL" if slot["failed"] else "PASS"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict} - {slot['title']}")
