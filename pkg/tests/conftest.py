import os
import sys
import time

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from sekine.idempotents import enumerate_catalog  # noqa: E402

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CATALOGS = {}


@pytest.fixture(scope="session")
def catalog():
    """catalog(k) -> verified Catalog, built once per session."""

    def get(k):
        if k not in _CATALOGS:
            _CATALOGS[k] = enumerate_catalog(k)
        return _CATALOGS[k]

    return get


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion in the terminal summary

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    number, text = marker
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    # parametrized criteria pass only if every case passes
    _, passed, total = _CRITERIA.get(number, (text, True, 0.0))
    _CRITERIA[number] = (text, passed and report.passed, total + elapsed)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", tuple(mark.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, passed, elapsed = _CRITERIA[number]
        flag = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {flag}  ({elapsed:6.2f} s)  {text}")
