import pytest

# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    num, title = marker.args
    ACCEPTANCE[num] = ("PASS" if rep.passed else "FAIL", title, item.user_properties)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, title, props = ACCEPTANCE[num]
        detail = "; ".join(f"{k}={v}" for k, v in props)
        terminalreporter.write_line(f"{status} criterion {num:2d}: {title}" + (f" [{detail}]" if detail else ""))
