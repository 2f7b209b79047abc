import re

_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    m = re.search(r"test_ac(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = f"AC{int(m.group(1)):02d} {m.group(2)}"
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _results[key] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        terminalreporter.write_line(f"{_results[key]}  {key}")
