"""Structured pass/fail records for exact identity checking.

Every verifier in the package returns a VerificationReport: one record per
checked law, with the first counterexample (in lexicographic basis order)
and both sides in canonical cyclotomic form when a law fails.  Records are
deterministic for a fixed input.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class CheckRecord:
    name: str
    status: str  # "pass" | "fail" | "error"
    witness: Optional[str] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    detail: Optional[str] = None
    seconds: Optional[float] = None
    informational: bool = False

    def to_dict(self, with_timing: bool = False) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "witness": self.witness,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "detail": self.detail,
            "seconds": round(self.seconds, 6) if (with_timing and self.seconds is not None) else None,
            "informational": self.informational,
        }


@dataclass
class VerificationReport:
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.records if not r.informational)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for r in other.records:
            if prefix:
                r = CheckRecord(
                    f"{prefix}{r.name}", r.status, r.witness, r.lhs, r.rhs,
                    r.detail, r.seconds, r.informational,
                )
            self.records.append(r)

    def first_failure(self) -> Optional[CheckRecord]:
        for r in self.records:
            if r.status != "pass" and not r.informational:
                return r
        return None

    def names(self, status: str) -> list[str]:
        return [r.name for r in self.records if r.status == status]

    def to_dict(self, with_timing: bool = False) -> dict:
        return {
            "ok": self.ok,
            "checks": [r.to_dict(with_timing) for r in self.records],
        }

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            line = f"[{r.status.upper():5s}] {r.name}"
            if r.witness is not None:
                line += f"  witness={r.witness}"
            if r.detail:
                line += f"  ({r.detail})"
            lines.append(line)
            if r.status == "fail" and r.lhs is not None:
                lines.append(f"         lhs = {r.lhs}")
                lines.append(f"         rhs = {r.rhs}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)

    def to_json(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), indent=2, sort_keys=True)

    def raise_if_failed(self, context: str = "") -> "VerificationReport":
        if not self.ok:
            bad = self.first_failure()
            msg = f"{context}: check '{bad.name}' {bad.status}"
            if bad.witness:
                msg += f" at {bad.witness}"
            if bad.detail:
                msg += f" ({bad.detail})"
            raise AssertionError(msg)
        return self


class timed:
    """Context manager stamping elapsed seconds onto a CheckRecord."""

    def __init__(self, record: CheckRecord):
        self.record = record

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.record

    def __exit__(self, *exc):
        self.record.seconds = time.perf_counter() - self._t0
        return False
