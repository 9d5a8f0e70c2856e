"""Machine-readable verification reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = "1"

PASS = "PASS"
FAIL = "FAIL"
PARTIAL = "PARTIAL"
TRUSTED = "TRUSTED-INPUT"
STATUSES = (PASS, FAIL, PARTIAL, TRUSTED)


class VerificationFailure(AssertionError):
    pass


class ContractViolation(AssertionError):
    pass


def to_jsonable(obj: Any) -> Any:
    """Rationals become "a/b" strings, quadratic elements {"a", "b", "d"} dicts."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round(obj, 6)
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda v: json.dumps(v, sort_keys=True))
        return items
    return str(obj)


@dataclass
class Check:
    name: str
    ok: bool
    operands: Any = None


@dataclass
class VerificationReport:
    """Outcome of one claim check.

    ``status`` is derived from the recorded checks unless set explicitly to
    TRUSTED-INPUT or PARTIAL.  A FAIL always carries the operands of the first
    violated check in ``witnesses["first_failure"]``.
    """

    claim: str
    status: str = PASS
    witnesses: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    source: str = ""
    timing: float = 0.0

    def check(self, name: str, ok: bool, operands: Any = None) -> bool:
        self.checks.append(Check(name, bool(ok), operands))
        if not ok and self.status != FAIL:
            self.status = FAIL
            self.witnesses.setdefault("first_failure", {"check": name, "operands": operands})
        return bool(ok)

    @property
    def passed(self) -> bool:
        return self.status in (PASS, TRUSTED)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "version": SCHEMA_VERSION,
            "claim": self.claim,
            "status": self.status,
            "witnesses": to_jsonable(self.witnesses),
            "parameters": to_jsonable(self.parameters),
            "checks": [{"name": c.name, "ok": c.ok, "operands": to_jsonable(c.operands)} for c in self.checks],
            "notes": list(self.notes),
        }
        if self.source:
            out["source"] = self.source
        if include_timing:
            out["timing"] = round(self.timing, 3)
        return out

    def to_json(self) -> dict:
        return self.to_dict()


def trusted(claim: str, source: str, **witnesses) -> VerificationReport:
    if not source:
        raise ValueError("TRUSTED-INPUT entries must name their source")
    return VerificationReport(claim, TRUSTED, witnesses=dict(witnesses), source=source)


@contextmanager
def timed(report: VerificationReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.timing = time.perf_counter() - t0


def exit_code(reports) -> int:
    """0 when everything passed or is trusted, 2 on any FAIL, 3 when only PARTIALs remain."""
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return 2
    if PARTIAL in statuses:
        return 3
    return 0
