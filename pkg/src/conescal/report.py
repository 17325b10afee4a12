"""Structured pass/fail records for sample-based axiom checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

MAX_STORED = 100


@dataclass
class Counterexample:
    inputs: tuple
    values: tuple
    clause: str


@dataclass
class CheckReport:
    """Tally of clause evaluations.

    ``checked`` counts evaluations, ``passed`` the ones that held. At most
    ``MAX_STORED`` counterexamples are kept, but ``failed`` counts them all.
    ``excluded`` counts sample points skipped as numerically ambiguous.
    """

    checked: int = 0
    passed: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)
    excluded: int = 0

    @property
    def failed(self) -> int:
        return self.checked - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, holds: bool, clause: str, inputs: tuple = (), values: tuple = ()) -> bool:
        self.checked += 1
        if holds:
            self.passed += 1
        elif len(self.counterexamples) < MAX_STORED:
            self.counterexamples.append(Counterexample(inputs, values, clause))
        return holds

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.checked += other.checked
        self.passed += other.passed
        self.excluded += other.excluded
        room = MAX_STORED - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[:max(room, 0)])
        return self

    def clauses(self) -> set[str]:
        return {c.clause for c in self.counterexamples}

    def summary(self) -> dict[str, Any]:
        return {"checked": self.checked, "passed": self.passed, "excluded": self.excluded}
