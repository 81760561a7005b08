import numpy as np
import pytest

from multiweb.graph import make_cycle
from multiweb.tiles import enumerate_tiles, incidence_matrix

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _CRITERIA.append((number, title, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_CRITERIA):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}  ({duration:.2f} s)")


@pytest.fixture(scope="session")
def cycle_tiles():
    cache = {}

    def get(L):
        if L not in cache:
            tiles = enumerate_tiles(make_cycle(L))
            cache[L] = (tiles, incidence_matrix(tiles))
        return cache[L]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
