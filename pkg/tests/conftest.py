"""Shared fixtures; collects the acceptance verdicts for the terminal summary."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List

import pytest


@dataclass
class Verdict:
    number: int
    title: str
    budget: float
    runtime: float = 0.0
    failures: List[str] = field(default_factory=list)
    measured: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures and self.runtime < self.budget

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        parts = [f"{tag} criterion {self.number:2d}: {self.title}", f"runtime {self.runtime:.2f}s/{self.budget:g}s"]
        if self.measured:
            parts.append(self.measured)
        if self.failures:
            parts.append("; ".join(self.failures[:3]) + (" ..." if len(self.failures) > 3 else ""))
        return " | ".join(parts)


VERDICTS: Dict[int, Verdict] = {}


class Recorder:
    """Times one acceptance criterion and records sub-case failures."""

    def __init__(self, number: int, title: str, budget: float):
        self.verdict = Verdict(number, title, budget)
        VERDICTS[number] = self.verdict

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.verdict.runtime = time.perf_counter() - self._t0
        if exc is not None:
            self.verdict.failures.append(f"{type(exc).__name__}: {exc}")
        return False

    def fail(self, message: str) -> None:
        self.verdict.failures.append(message)

    def measured(self, text: str) -> None:
        self.verdict.measured = text

    def check(self) -> None:
        v = self.verdict
        assert v.runtime < v.budget, f"runtime {v.runtime:.2f}s exceeds {v.budget}s"
        assert not v.failures, "\n".join(v.failures)


@pytest.fixture
def criterion():
    return Recorder


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[n].line())
    passed = sum(v.passed for v in VERDICTS.values())
    terminalreporter.write_line(f"{passed}/{len(VERDICTS)} acceptance criteria pass")
