import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

Q_NOT_R0 = [[2, 1, -1], [4, 0, -1], [3, 0, -1]]


@pytest.fixture
def rng():
    return random.Random(20260101)


@pytest.fixture
def q_not_r0():
    return Q_NOT_R0


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
