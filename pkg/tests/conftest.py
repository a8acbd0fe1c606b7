"""Prints one pass/fail line per acceptance criterion after the run.

The acceptance tests live in test_acceptance.py as test_criterion_<N>_<label>;
their outcomes are collected here and emitted through the terminal reporter,
so the lines appear even under pytest's default output capture.
"""

import re

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_outcomes = {}


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    num, label = int(m.group(1)), m.group(2)
    if report.failed:
        _outcomes[(num, label)] = "FAIL"
    elif report.when == "call" and report.passed:
        _outcomes[(num, label)] = "PASS"
    elif report.skipped:
        _outcomes[(num, label)] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (num, label), outcome in sorted(_outcomes.items()):
        terminalreporter.write_line(f"criterion {num} ({label}): {outcome}")
