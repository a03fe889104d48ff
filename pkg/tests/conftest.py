from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from mopsrw.hyperfun import HyperTuple

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GENERIC = HyperTuple(1, 2, 3, Fraction(7, 2))
SEMI = HyperTuple(Fraction(4, 3), Fraction(5, 3), 2, Fraction(5, 2))
STOCH = HyperTuple(Fraction(1, 3), Fraction(2, 3), Fraction(1, 2), 1)
PINEIRO = HyperTuple(Fraction(1, 2), 1, Fraction(1, 2), 2)
ETA = HyperTuple(1, Fraction(3, 2), Fraction(5, 2), 3)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config._criteria = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    store = report._config_ref._criteria
    n, title = crit
    ok = store.get(n, (title, True))[1]
    if report.when == "call" or report.failed:
        ok = ok and report.passed
    store[n] = (title, ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = tuple(m.args)
        rep._config_ref = item.config


def pytest_terminal_summary(terminalreporter, config):
    store = getattr(config, "_criteria", {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        title, ok = store[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
