import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def record_criterion():
    """Store the PASS/FAIL line of one acceptance criterion for the summary."""
    def record(number, results):
        status = "PASS" if all(r.passed for r in results) else "FAIL"
        details = "; ".join(f"{r.name} = {r.measured:.4g} (target {r.target})" for r in results)
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {status}  {details}"
        for r in results:
            print(r.line())
        return status == "PASS"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
