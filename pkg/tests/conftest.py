import random
import sys

import pytest

from slalpha import fixtures


def group(fixture: str, *names: str) -> list[str]:
    g = fixtures.get(fixture).groups
    return [x for n in names for x in g[n]]


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def catalog_spaces():
    return {name: fx.space() for name, fx in fixtures.CATALOG.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
