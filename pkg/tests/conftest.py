from __future__ import annotations

from pathlib import Path

import pytest

from cnotroute import bundled_backend
from cnotroute.topology import Topology

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def nairobi():
    return bundled_backend("nairobi")


@pytest.fixture(scope="session")
def guadalupe():
    return bundled_backend("guadalupe")


@pytest.fixture(scope="session")
def cairo():
    return bundled_backend("cairo")


def line_topology(n: int, w: float = 0.01) -> Topology:
    return Topology(range(n), [(i, i + 1, w) for i in range(n - 1)], name=f"line{n}")


@pytest.fixture
def data_dir():
    return DATA


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
