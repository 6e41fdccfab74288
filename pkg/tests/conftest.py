import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_acceptance():
    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
