"""Shared pytest configuration.

Prints a one-line PASS/FAIL verdict per acceptance criterion at the end of
the run so the acceptance gate can be audited at a glance.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    entries = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call":
                continue
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            entries.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if not entries:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, verdict in sorted(entries):
        terminalreporter.write_line(f"{verdict}  {name}")
