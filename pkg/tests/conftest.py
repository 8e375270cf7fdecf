from pathlib import Path

import pytest

from projlds.fixtures import FIXTURE_DIR
from projlds.lds import import_matrix


@pytest.fixture(scope="session")
def published_7x9():
    return import_matrix(FIXTURE_DIR / "lds_7x9.json")


@pytest.fixture(scope="session")
def published_13x15():
    return import_matrix(FIXTURE_DIR / "lds_13x15.json")


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("]")[0].split("[")[1])):
            terminalreporter.write_line(line)
