import pytest

from aerocell.config import load_config

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def paper_cfg():
    return load_config()


@pytest.fixture
def gate():
    """Record one acceptance verdict line; the test still asserts on its own."""

    def record(criterion, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
