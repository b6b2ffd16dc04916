import pytest

from fqhyper.classnumbers import get_table

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def small_table():
    return get_table(20_000)


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
