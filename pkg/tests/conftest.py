import pytest

_criteria: dict[str, tuple[int, str]] = {}
_outcomes: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = (mark.args[0], mark.args[1])


def pytest_runtest_logreport(report):
    entry = _criteria.get(report.nodeid)
    if entry is None:
        return
    number = entry[0]
    if report.failed:
        _outcomes[number] = "FAIL"
    elif report.when == "call" and number not in _outcomes:
        _outcomes[number] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in sorted(set(_criteria.values())):
        status = _outcomes.get(number, "NOT RUN")
        terminalreporter.write_line(f"{status:7} criterion {number:2}: {title}")
