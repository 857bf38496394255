import pytest

# criterion number -> list of (label, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, list] = {}


@pytest.fixture
def record():
    def _record(criterion, label, passed, detail=""):
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(passed), detail))
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[criterion]
        ok = all(p for _, p, _ in parts)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
        for label, passed, detail in parts:
            terminalreporter.write_line(f"    [{'pass' if passed else 'FAIL'}] {label}: {detail}")
