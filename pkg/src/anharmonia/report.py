"""Structured pass/fail results shared by every verification routine."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "passed", "checks"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "passed": {"type": "boolean"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "name",
                    "status",
                    "residual_kind",
                    "residual",
                    "order",
                    "tolerance",
                    "wall_time",
                    "details",
                ],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": [PASS, FAIL, SKIPPED]},
                    "residual_kind": {"enum": ["exact", "max_abs", "none"]},
                    "residual": {"type": ["string", "number", "null"]},
                    "order": {"type": ["integer", "null"]},
                    "tolerance": {"type": ["number", "null"]},
                    "wall_time": {"type": ["number", "null"]},
                    "details": {"type": "object"},
                },
            },
        },
    },
}


def jsonable(x):
    """Convert Fractions, tuples and objects with ``to_json`` into plain JSON values."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if x == x and abs(x) != float("inf") else str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


@dataclass
class Check:
    name: str
    status: str
    residual_kind: str = "none"
    residual: object = None
    order: int | None = None
    tolerance: float | None = None
    wall_time: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_json(self, timing: bool = False) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual_kind": self.residual_kind,
            "residual": jsonable(self.residual),
            "order": self.order,
            "tolerance": self.tolerance,
            "wall_time": round(self.wall_time, 6) if timing and self.wall_time is not None else None,
            "details": jsonable(self.details),
        }


class Report:
    def __init__(self, suite: str, checks=None):
        self.suite = suite
        self.checks: list[Check] = list(checks or [])

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def exact(self, name, ok: bool, residual="0", order=None, **details) -> Check:
        """Record an exact check; ``residual`` describes the first discrepancy when failing."""
        return self.add(
            Check(name, PASS if ok else FAIL, "exact", "0" if ok else residual, order, None, None, details)
        )

    def numeric(self, name, value: float, tol: float, order=None, **details) -> Check:
        ok = value == value and value < tol
        return self.add(Check(name, PASS if ok else FAIL, "max_abs", float(value), order, tol, None, details))

    def skip(self, name, reason: str) -> Check:
        return self.add(Check(name, SKIPPED, details={"reason": reason}))

    def extend(self, other: "Report", prefix: str | None = None):
        for c in other.checks:
            if prefix:
                c = Check(**{**c.__dict__, "name": f"{prefix}.{c.name}"})
            self.checks.append(c)
        return self

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def sorted(self) -> "Report":
        return Report(self.suite, sorted(self.checks, key=lambda c: c.name))

    def to_json(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_json(timing) for c in self.checks],
        }

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True)

    def render_text(self, timing: bool = False) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        width = max((len(c.name) for c in self.checks), default=4)
        for c in self.checks:
            res = "" if c.residual is None else f" residual={jsonable(c.residual)}"
            extra = f" order={c.order}" if c.order is not None else ""
            if c.tolerance is not None:
                extra += f" tol={c.tolerance:g}"
            if timing and c.wall_time is not None:
                extra += f" time={c.wall_time:.3f}s"
            lines.append(f"  {c.status.upper():7} {c.name:<{width}}{res}{extra}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Report({self.suite!r}, {len(self.checks)} checks, passed={self.passed})"


@contextmanager
def timed(report: Report):
    """Stamp wall time onto every check appended inside the block."""
    start = time.perf_counter()
    before = len(report.checks)
    yield
    elapsed = time.perf_counter() - start
    for c in report.checks[before:]:
        if c.wall_time is None:
            c.wall_time = elapsed
