import os

import pytest

from atlcheck.modelio import load_model

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def fix():
    return lambda name: os.path.join(FIX, name)


@pytest.fixture
def cgs_nd():
    return load_model(os.path.join(FIX, "nondet.model"))


@pytest.fixture
def ats_nd():
    return load_model(os.path.join(FIX, "nondet.ats"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
