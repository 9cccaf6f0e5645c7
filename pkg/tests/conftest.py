"""Pytest wiring: corpus fixtures and a calmer hypothesis profile."""

from __future__ import annotations

import sys

import pytest
from hypothesis import HealthCheck, settings

import corpus

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def small_corpus():
    return corpus.SMALL_CORPUS


@pytest.fixture(scope="session")
def connected_corpus():
    return corpus.CONNECTED_CORPUS


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdict lines where capture can't eat them."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
