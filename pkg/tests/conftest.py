import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ramify.specfile import load_spec  # noqa: E402


@lru_cache(maxsize=None)
def spec(name):
    return load_spec(name)


@lru_cache(maxsize=None)
def sequence(name, depth=None):
    return spec(name).sequence(depth)


@lru_cache(maxsize=None)
def pair(name):
    return spec(name).pair()


@pytest.fixture
def e1():
    return sequence("e1")


@pytest.fixture
def e1_pair():
    return pair("e1_ext")


# one summary line per acceptance criterion, filled in by test_acceptance
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
