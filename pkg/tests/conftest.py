"""Print one PASS/FAIL line per acceptance criterion after the run."""

import re

_PATTERN = re.compile(r"test_acceptance\.py::test_c(\d\d)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            m = _PATTERN.search(getattr(rep, "nodeid", ""))
            if not m:
                continue
            num, label = m.group(1), m.group(2).replace("_", "-")
            ok = outcome == "passed" and results.get(num, (label, True))[1]
            results[num] = (label, ok)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(results):
        label, ok = results[num]
        terminalreporter.write_line(
            f"criterion {num} [{label}]: {'PASS' if ok else 'FAIL'}")
