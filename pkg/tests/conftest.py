import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from selberg_lab.arith_tables import build_tables  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def tables_small():
    return build_tables(20000)


@pytest.fixture(scope="session")
def tables_big():
    return build_tables(2 * 10**6 + 200)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
