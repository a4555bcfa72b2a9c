"""Shared fixtures and the per-criterion acceptance summary."""

from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

CRITERIA = {
    1: "small-conductor trees: liftable, conductor h, different 0, lambda -1, < 10 s",
    2: "unique good c-solution: elimination equals exhaustive scan",
    3: "good z-solution counts r! and 1*3 for (1,2,4)",
    4: "good solutions have Jacobian rank alpha-1",
    5: "single-zero logarithmic forms: Cartier fixed, residues, zero order",
    6: "type (1,1,4,4) mod 5: no witness for k <= 4, symbolic obstruction",
    7: "large-conductor trees: liftable, mu, exact central forms, < 60 s",
    8: "eta coefficient: degree law and P(1) != 0",
    9: "local action: sigma^p, tau^2, dihedral relation, conductor",
    10: "property suites (>= 200 examples each)",
}

_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by this test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[crit].append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        runs = _outcomes.get(n, [])
        if not runs:
            status = "NOT RUN"
        elif all(o == "passed" for _, o in runs):
            status = "PASS"
        else:
            status = "FAIL"
        failed = sum(1 for _, o in runs if o != "passed")
        terminalreporter.write_line(f"criterion {n:2d}: {status:7s} {text} [{len(runs) - failed}/{len(runs)} tests]")


@pytest.fixture(scope="session")
def small_cases():
    return [(p, h) for p in (5, 7, 11, 13) for h in range(3, p, 2)]
