import pytest

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        n = marker.args[0]
        passed, names = _results.get(n, (True, []))
        _results[n] = (passed and report.passed, names + [item.name])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        passed, names = _results[n]
        label = names[0].split("[")[0]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  ({label}, {len(names)} case(s))")
