from __future__ import annotations

import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one summary line per acceptance criterion."""
    def record(n: int, name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE[n] = f"CRITERION {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
