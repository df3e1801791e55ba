"""Check reports shared by the verification entry points."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import List, Optional

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"


class CheckError(ValueError):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


@dataclass
class Entry:
    name: str
    status: str
    expected: Optional[str] = None
    actual: Optional[str] = None
    detail: Optional[str] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        for k in ("expected", "actual", "detail"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        return out


@dataclass
class Report:
    name: str
    entries: List[Entry] = field(default_factory=list)
    wall_time: float = 0.0
    skipped_reason: Optional[str] = None

    @property
    def status(self) -> str:
        if self.skipped_reason is not None:
            return SKIPPED
        if any(e.status == FAIL for e in self.entries):
            return FAIL
        return PASS

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def add(self, name: str, passed: bool, expected=None, actual=None, detail=None) -> Entry:
        e = Entry(name, PASS if passed else FAIL,
                  None if expected is None else str(expected),
                  None if actual is None else str(actual), detail)
        self.entries.append(e)
        return e

    def skip(self, name: str, detail: str) -> Entry:
        e = Entry(name, SKIPPED, detail=detail)
        self.entries.append(e)
        return e

    def extend(self, other: "Report", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(Entry(prefix + e.name, e.status, e.expected, e.actual, e.detail))

    def failures(self) -> List[Entry]:
        return [e for e in self.entries if e.status == FAIL]

    def summary(self) -> str:
        n_pass = sum(e.status == PASS for e in self.entries)
        n_fail = sum(e.status == FAIL for e in self.entries)
        n_skip = sum(e.status == SKIPPED for e in self.entries)
        line = f"{self.name}: {self.status} ({n_pass} passed, {n_fail} failed"
        if n_skip:
            line += f", {n_skip} skipped"
        return line + ")"

    def to_json(self, timing: bool = True) -> dict:
        out = {"name": self.name, "status": self.status, "checks": [e.to_json() for e in self.entries]}
        if self.skipped_reason:
            out["skipped_reason"] = self.skipped_reason
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@contextmanager
def timed(report: Report):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_time += time.perf_counter() - t0
