import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERION_RE = re.compile(r"test_c(\d+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _CRITERION_RE.match(report.nodeid.rsplit("::", 1)[-1])
    if not match or "test_acceptance" not in report.nodeid:
        return
    num = int(match.group(1))
    _results[num] = ("PASS" if report.passed else "FAIL", report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        status, nodeid = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  ({nodeid.split('::')[-1]})")
