import numpy as np
import pytest

from klmat.signals import MgParams, embed, mackey_glass, split, stack


@pytest.fixture(scope="session")
def mg_series():
    return mackey_glass(MgParams(), 1000)


@pytest.fixture(scope="session")
def mg_desk(mg_series):
    """Order-10 Mackey-Glass samples, 500 train / 200 test."""
    train, test = split(embed(mg_series, 10), 500, 200)
    return train, test


@pytest.fixture(scope="session")
def mg_desk_arrays(mg_desk):
    train, test = mg_desk
    return stack(train) + stack(test)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


# -- acceptance summary: one line per criterion --------------------------------

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    mark = getattr(report, "criterion", None)
    if mark is None:
        return
    number, title = mark
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if report.when == "call" or report.failed:
        entry["ran"] = True
        entry["ok"] = entry["ok"] and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}  {status}  {entry['title']}")
