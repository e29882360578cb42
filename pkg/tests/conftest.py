"""Shared pytest wiring: the acceptance-criteria summary table.

Tests carrying ``@pytest.mark.acceptance(criterion=n, title=...)`` are
the package's headline checks; after any run that included at least one
of them, a table with one PASS/FAIL line per criterion is appended to
the terminal summary.  Criteria whose tests were deselected (the slow
tier) are listed as NOT RUN rather than silently omitted.
"""

import pytest

CRITERIA = {
    1: "Ising closed form matches exact dynamics, disorder-independent",
    2: "typicality error shrinks exponentially with size, as 1/sqrt(n_haar)",
    3: "nearest-neighbor front is logarithmic, power-law front algebraic",
    4: "disorder-averaged power-law OTOC saturates at 2",
    5: "short-time growth exponents: 2 (power-law), 2r (nearest-neighbor)",
    6: "slow-fraction ratio and late-time multimodality at strong disorder",
    7: "pulse-engineered average Hamiltonian has the designed XXZ form",
    8: "driven echo tracks the designed chain; plain cycle fails 5x worse",
    9: "undriven echo protocol equals the direct state OTOC",
    10: "initial-state ensemble economics across system sizes",
}

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(criterion, title): one of the package's headline acceptance checks",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    criterion = marker.kwargs.get("criterion")
    if report.when == "call" or (report.when == "setup" and report.outcome == "failed"):
        _RESULTS.setdefault(criterion, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    # The default tier is `-m 'not slow'` via addopts; anything else is a
    # hand-picked selection and the hint would mislead.
    markexpr = config.getoption("-m", default="")
    if markexpr in ("", "not slow"):
        not_run = "NOT RUN (deselected; slow tier runs with `pytest -m slow`)"
    else:
        not_run = f"NOT RUN (deselected by -m {markexpr!r})"
    terminalreporter.section("acceptance criteria")
    for criterion, title in sorted(CRITERIA.items()):
        outcomes = _RESULTS.get(criterion, [])
        if not outcomes:
            status = not_run
        elif all(outcome == "passed" for outcome in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {criterion:>2}: {status:8s} {title}")
