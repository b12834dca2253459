import pytest

from acceptance_log import LOG


def pytest_terminal_summary(terminalreporter):
    if not LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in LOG:
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    import random

    return random.Random(20240611)
