"""Structured pass/fail results of identity checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = 1


def _text(x) -> str:
    if isinstance(x, str):
        return x
    from .frontend import render

    return render(x)


@dataclass
class CheckReport:
    suite: str
    passed: bool = True
    counterexamples: list = field(default_factory=list)
    cases: int = 0
    notes: list = field(default_factory=list)
    max_counterexamples: int = 5

    def record(self, ok: bool, inputs=None, lhs=None, rhs=None) -> bool:
        self.cases += 1
        if not ok:
            self.fail(inputs, lhs, rhs)
        return ok

    def fail(self, inputs, lhs, rhs):
        self.passed = False
        if len(self.counterexamples) < self.max_counterexamples:
            if isinstance(inputs, (list, tuple)):
                inputs = [_text(i) for i in inputs]
            elif inputs is not None:
                inputs = [_text(inputs)]
            self.counterexamples.append(
                {"inputs": inputs or [], "lhs": _text(lhs), "rhs": _text(rhs)}
            )

    def check_equal(self, inputs, lhs, rhs) -> bool:
        return self.record(lhs == rhs, inputs, lhs, rhs)

    def merge(self, other: "CheckReport", prefix: bool = True) -> "CheckReport":
        self.cases += other.cases
        if not other.passed:
            self.passed = False
        for ce in other.counterexamples:
            if len(self.counterexamples) < self.max_counterexamples:
                ce = dict(ce)
                if prefix:
                    ce["suite"] = other.suite
                self.counterexamples.append(ce)
        self.notes.extend(other.notes)
        return self

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "passed": self.passed,
            "cases": self.cases,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite} ({self.cases} cases)"

    def __bool__(self):
        return self.passed


def combine(suite: str, reports) -> CheckReport:
    out = CheckReport(suite)
    for r in reports:
        out.merge(r)
    return out
