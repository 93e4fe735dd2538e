import re

import pytest

from hollingtanner.model import Params


@pytest.fixture
def region_ii():
    return Params(A=0.15, C=0.28, Q=0.575, S=0.26, d=5.0)


# one summary line per acceptance criterion
_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_criteria: dict[int, list] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria.setdefault(int(m.group(1)), []).append(report)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        reports = _criteria[n]
        ok = all(r.outcome == "passed" for r in reports)
        details = "; ".join(str(v) for r in reports for k, v in r.user_properties if k == "detail")
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {details}")
