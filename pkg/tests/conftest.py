import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_AC_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    cid, text = mark.args
    ok = rep.passed
    prev = _AC_RESULTS.get(cid, (True, text, 0.0))
    _AC_RESULTS[cid] = (prev[0] and ok, text, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_AC_RESULTS, key=lambda c: int(c[2:])):
        ok, text, dt = _AC_RESULTS[cid]
        terminalreporter.write_line(f"{cid} {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {text}")
