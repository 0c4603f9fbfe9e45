import os

import numpy as np
import pytest

os.environ.setdefault("TFREG_THREADS", "1")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test implements")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if rep.when == "call" or failed:
        prev = _CRITERIA.get(label, True)
        _CRITERIA[label] = prev and not failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (int(s.split(".")[0].rstrip("abcdefgh")), s)):
        terminalreporter.write_line(f"criterion {label}: {'PASS' if _CRITERIA[label] else 'FAIL'}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
