import numpy as np
import pytest
from hypothesis import settings

from twopoint.spaces import catalog, representative_spaces

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@pytest.fixture(params=representative_spaces(), ids=lambda p: f"{p.family.value}-{p.m}")
def space(request):
    return request.param


@pytest.fixture
def s2():
    return catalog("sphere", 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_lines():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
