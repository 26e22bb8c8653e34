import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[object, dict] = {}
_MARKS: dict[str, tuple] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _MARKS.get(report.nodeid)
    if marker is None:
        return
    key, title = marker
    entry = _ACCEPTANCE.setdefault(key, {"title": title, "ok": True, "tests": 0})
    entry["tests"] += 1
    entry["ok"] &= report.outcome == "passed"


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _MARKS[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def order(k):
        return (0, k) if isinstance(k, int) else (1, str(k))

    for key in sorted(_ACCEPTANCE, key=order):
        e = _ACCEPTANCE[key]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {key}: {e['title']} ({e['tests']} tests)")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
