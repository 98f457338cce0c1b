import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit_s): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args[:2]
    failed = report.failed or (report.when == "setup" and report.skipped)
    if report.when == "call" or failed:
        prev = _criteria.get(number)
        passed = report.passed and (prev is None or prev[1])
        _criteria[number] = (title, passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed, secs = _criteria[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {title} ({secs:.2f} s)")
