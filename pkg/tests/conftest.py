"""Collect ``@pytest.mark.acceptance(number, title)`` outcomes and print one line each."""

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when == "setup" and report.outcome != "passed" or report.when == "call":
        marker = dict(report.user_properties).get("acceptance")
        if marker is None:
            return
        detail = dict(report.user_properties).get("detail", "")
        _OUTCOMES[marker] = ("PASS" if report.passed else "FAIL", detail)


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        item.user_properties.append(("acceptance", tuple(marker.args)))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), (verdict, detail) in sorted(_OUTCOMES.items()):
        line = f"criterion {number} {title}: {verdict}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
