import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome, then assert it."""

    def record(name, passed, detail):
        _CRITERIA.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
