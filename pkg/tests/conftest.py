from collections import defaultdict

import pytest

_ACCEPTANCE = defaultdict(list)


@pytest.fixture
def criterion():
    """Record a named check under an acceptance criterion, then assert it."""

    def record(number, part, ok, detail=""):
        ok = bool(ok)
        _ACCEPTANCE[number].append((part, ok, detail))
        line = f"criterion {number} [{part}] {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        body = "; ".join(f"{p}: {'ok' if ok else 'FAIL'} {d}".rstrip() for p, ok, d in parts)
        terminalreporter.write_line(f"criterion {number:>2}: {status}  ({body})")
