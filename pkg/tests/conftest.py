import pytest

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        # one failing check fails the whole criterion
        if _ACCEPTANCE.get(label) != "FAIL":
            _ACCEPTANCE[label] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]}  {label}")
