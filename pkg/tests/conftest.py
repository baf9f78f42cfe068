"""Shared fixtures: cached campaign runner and acceptance-criteria summary."""

import pytest

from udnsim import engine

_CRITERIA_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(criterion_id: str, passed: bool, detail: str) -> None:
    _CRITERIA_RESULTS.append((criterion_id, passed, detail))


@pytest.fixture(scope="session")
def run_cached():
    """Campaign runner with memoization so criteria can share campaigns."""
    cache = {}

    def run(cfg):
        if cfg not in cache:
            cache[cfg] = engine.run_campaign(cfg, n_workers=2)
        return cache[cfg]

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA_RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in sorted(_CRITERIA_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{cid}: {status} -- {detail}")
