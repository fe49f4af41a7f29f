import re

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_criteria: dict[int, list] = {}


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if m:
        entry = _criteria.setdefault(int(m.group(1)), [m.group(2), True])
        entry[1] &= not report.failed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n, (name, ok) in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {n:2d} {name:<28} {'PASS' if ok else 'FAIL'}")
