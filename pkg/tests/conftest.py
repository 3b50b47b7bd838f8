import numpy as np
import pytest

from cjf import gf2
from cjf.register import FeedbackFunction, generate, period

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow: pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    for rep in terminalreporter.stats.get("skipped", []):
        if "test_acceptance" in rep.nodeid:
            ACCEPTANCE_LINES.append(f"SKIP  {rep.nodeid.split('::')[-1]}: {rep.longrepr[-1]}")
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernels once so timed checks measure steady-state work
    F = FeedbackFunction.linear("x^4+x+1")
    period(F, 1)
    generate(F, 1, 4)
    period(F.with_jumps({1}), 1)
    generate(F.with_jumps({1}), 1, 4)


@pytest.fixture(scope="session")
def ctx4():
    return gf2.field_new("x^4+x+1")


@pytest.fixture(scope="session")
def ctx31():
    return gf2.field_new("x^31+x^3+1")


@pytest.fixture(scope="session")
def ctx127():
    return gf2.field_new("x^127+x+1")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def registry_upto(n_max):
    return [p for n, ps in sorted(gf2.REGISTRY.items()) if n <= n_max for p in ps]
