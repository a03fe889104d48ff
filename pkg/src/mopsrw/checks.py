"""Result object returned by every exact identity check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    name: str
    ok: bool = True
    cases: int = 0
    counterexample: Any = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def record(self, passed: bool, where=None):
        self.cases += 1
        if not passed and self.ok:
            self.ok = False
            self.counterexample = where
        return passed

    def merge(self, other: "CheckResult"):
        self.cases += other.cases
        if not other.ok and self.ok:
            self.ok = False
            self.counterexample = {other.name: other.counterexample}
        return self
