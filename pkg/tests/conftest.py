import os

import pytest

_CRITERIA: dict[int, list] = {}
_TITLES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _TITLES[number] = title
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA.setdefault(number, []).append((item.name, report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        results = _CRITERIA[number]
        ok = all(passed for _, passed, _ in results)
        secs = sum(d for _, _, d in results)
        failed = [name for name, passed, _ in results if not passed]
        line = f"criterion {number} [{_TITLES[number]}]: {'PASS' if ok else 'FAIL'} ({secs:.2f}s)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _no_seed_env(monkeypatch):
    monkeypatch.delenv("QUASIPOS_SEED", raising=False)
    yield


@pytest.fixture
def cpu_count():
    return os.cpu_count() or 1
