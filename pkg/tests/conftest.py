from __future__ import annotations

import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@lru_cache(maxsize=None)
def verma(type_name: str, p: int, levi: tuple | None, weight: tuple):
    """Cached baby Verma module; ``levi`` None means the regular form."""
    from badlie.chevalley import chevalley_algebra
    from badlie.linform import regular_form, standard_levi_form
    from badlie.verma import build_baby_verma

    alg = chevalley_algebra(type_name, p)
    chi = regular_form(alg) if levi is None else standard_levi_form(alg, levi)
    return build_baby_verma(alg, chi, weight)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
