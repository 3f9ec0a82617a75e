import pytest

_results: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: long-running acceptance check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    key = (mark.args[0], item.name)
    if rep.when == "setup" and not rep.failed:
        return
    status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    _results[key] = status
    print(f"\nACCEPTANCE criterion {mark.args[0]} [{item.name}]: {status}")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (n, name), status in sorted(_results.items()):
        tr.write_line(f"criterion {n}: {status:4}  {name}")
