"""Shared fixtures and the acceptance-criteria terminal summary.

Acceptance tests call record() once per criterion; the summary hook
prints one pass/fail line per recorded criterion after the run.
"""

from dataclasses import dataclass

import pytest


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str


ACCEPTANCE: list[CriterionResult] = []


def record(number: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(CriterionResult(number, name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for result in sorted(ACCEPTANCE, key=lambda r: r.number):
        tag = "PASS" if result.ok else "FAIL"
        terminalreporter.write_line(
            f"[{tag}] criterion {result.number} ({result.name}): {result.detail}"
        )


@pytest.fixture
def rng():
    from qpkelab.rng import derive_stream

    return derive_stream(20260816)
