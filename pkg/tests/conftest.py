import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diagsos.search import SearchConfig, compute_rnd  # noqa: E402

_CERTS = {}


def certificate(n, d, **kw):
    """Session-wide memo of exact searches; the (5,2) run is the slow one."""
    key = (n, d, tuple(sorted(kw.items())))
    if key not in _CERTS:
        _CERTS[key] = compute_rnd(SearchConfig(n, d, **kw))
    return _CERTS[key]


@pytest.fixture(scope="session")
def cert_of():
    return certificate


def slow_enabled():
    return os.environ.get("DIAGSOS_SLOW") == "1"


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
