import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(pytestconfig):
    """Record one pass/fail line for an acceptance criterion."""
    lines = pytestconfig.stash.setdefault(_LINES, [])

    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
