"""Collects the acceptance outcomes and prints one line per criterion at the end of the run."""
import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)$")
_outcomes = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        # a failing setup/teardown also fails the criterion
        if _outcomes.get(key) != "FAIL":
            _outcomes[key] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (n, label), outcome in sorted(_outcomes.items()):
        terminalreporter.write_line(f"criterion {n}: {outcome}  {label}")
