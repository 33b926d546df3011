import pytest

# Verdict lines appended by the acceptance checks, echoed as a checklist
# after the usual pytest summary so a full run ends with one line per check.
CHECKLIST: list[str] = []


@pytest.fixture
def verdict():
    def record(line: str) -> None:
        CHECKLIST.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CHECKLIST:
        terminalreporter.section("acceptance checklist")
        for line in CHECKLIST:
            terminalreporter.write_line(line)
