import pytest

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one ``PASS``/``FAIL`` line; it is also echoed in the summary."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number} {title}: {detail}"
        _CRITERIA.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
