import re

import pytest

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = re.match(r"test_criterion_(\d+)_", item.name)
    if not m:
        return
    n = int(m.group(1))
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    failed = report.failed or (report.when == "call" and report.outcome != "passed")
    prev = _CRITERIA.get(n, (doc, True))
    _CRITERIA[n] = (doc, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        doc, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {doc}")
