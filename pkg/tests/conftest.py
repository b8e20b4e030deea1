"""Shared pytest plumbing: an end-of-run acceptance summary.

Every test named ``test_criterion_*`` in test_acceptance.py gets one
PASS/FAIL line in the terminal summary, labeled by the first line of its
docstring, so the gate is readable at a glance even in a long -v run.
"""

_criterion_docs = {}
_criterion_results = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance" in item.nodeid and item.name.startswith("test_criterion_"):
            doc = (item.function.__doc__ or "").strip().splitlines()
            _criterion_docs[item.nodeid] = doc[0] if doc else ""


def pytest_runtest_logreport(report):
    if report.nodeid not in _criterion_docs:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criterion_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_criterion_results):
        outcome = _criterion_results[nodeid]
        label = "PASS" if outcome == "passed" else outcome.upper()
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{label:6s} {name} — {_criterion_docs[nodeid]}")
