import pytest

from pearle.model import make_rng, sample_states


@pytest.fixture(scope="session")
def states_1e5():
    return sample_states(make_rng(20150519), 100_000)


@pytest.fixture(scope="session")
def states_1e6():
    return sample_states(make_rng(9875), 1_000_000)


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    Usage: ``criterion(1, "name", "detail", ok)`` then assert ``ok``.
    """

    def record(number, name, detail, ok):
        ACCEPTANCE_LINES[number] = f"[{'PASS' if ok else 'FAIL'}] C{number} {name}: {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
