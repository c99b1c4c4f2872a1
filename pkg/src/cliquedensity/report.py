"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, List, Optional


@dataclass(frozen=True)
class CheckResult:
    claim: str
    scope: str  # interval or parameter label the check ran over
    passed: bool
    worst_slack: float  # >= 0 means satisfied; most negative value seen otherwise
    witness: Optional[str] = None
    points: int = 0


@dataclass
class VerificationReport:
    title: str
    results: List[CheckResult] = field(default_factory=list)

    def add(self, claim, scope, passed, worst_slack, witness=None, points=0):
        self.results.append(CheckResult(claim, scope, bool(passed), float(worst_slack), witness, points))

    def extend(self, other: "VerificationReport") -> None:
        self.results.extend(other.results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def claims(self) -> List[str]:
        seen = []
        for r in self.results:
            if r.claim not in seen:
                seen.append(r.claim)
        return seen

    def claim_passed(self, claim: str) -> bool:
        rows = [r for r in self.results if r.claim == claim]
        return bool(rows) and all(r.passed for r in rows)

    def to_csv(self, fh=None, digits: int = 15) -> str:
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["claim", "interval", "status", "worst_slack", "witness"])
        for r in self.results:
            w.writerow([r.claim, r.scope, "pass" if r.passed else "FAIL",
                        format(r.worst_slack, f".{digits}g"), r.witness or ""])
        return out.getvalue() if fh is None else ""

    def summary_lines(self) -> Iterable[str]:
        for claim in self.claims():
            rows = [r for r in self.results if r.claim == claim]
            worst = min(r.worst_slack for r in rows)
            status = "pass" if all(r.passed for r in rows) else "FAIL"
            yield f"{claim:<14} {status:<4}  checks={len(rows):<4} worst_slack={worst:.3e}"
