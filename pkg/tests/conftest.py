"""Shared fixtures and the slow-test switch."""

import pytest

from src.tcdata import generate_unit


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="Run slow Monte Carlo tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo acceptance test (needs --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def synthetic_unit():
    """A 400-resident unit with planted rho = 0.5."""
    return generate_unit(n=400, rho=0.5, seed=11)


@pytest.fixture(scope="session")
def small_unit():
    """A small unit for quick pipeline runs."""
    return generate_unit(n=120, rho=0.4, seed=3)
