"""Structured verification records."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

from .gamma import ENGINE_VERSION
from .padic import PadicInt

REPORT_SCHEMA = 1
PROVENANCE = ("paper", "derived", "property")
STATUSES = ("pass", "fail", "computed")


def encode(value):
    """JSON-friendly form of a computed or expected value."""
    if isinstance(value, PadicInt):
        return {"residue": value.residue, "modulus": value.modulus}
    if isinstance(value, bool):
        return {"exact": "true" if value else "false"}
    if isinstance(value, (int, Fraction)):
        return {"exact": str(value)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return {"exact": str(value)}


@dataclass
class VerifyReport:
    check: str
    params: dict
    computed: object
    expected: object = None
    provenance: str | None = None
    status: str = "computed"
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = ENGINE_VERSION

    def __post_init__(self):
        if self.expected is not None and self.provenance not in PROVENANCE:
            raise ValueError(f"{self.check}: expected value needs a provenance tag, got {self.provenance!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "check": self.check,
            "params": {k: encode(v) if not isinstance(v, (str, int)) else v for k, v in self.params.items()},
            "computed": encode(self.computed),
            "expected": None if self.expected is None else encode(self.expected),
            "provenance": self.provenance,
            "status": self.status,
            "details": encode(self.details),
            "version": self.version,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_text(self) -> str:
        def show(v):
            if isinstance(v, PadicInt):
                return f"{v.residue} mod {v.prime}^{v.precision}"
            if isinstance(v, dict):
                return ", ".join(f"{k}={show(x)}" for k, x in v.items())
            return str(v)

        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"[{self.status.upper():8s}] {self.check} ({params}): computed {show(self.computed)}"
        if self.expected is not None:
            line += f"; expected {show(self.expected)} [{self.provenance}]"
        return line


def checked(check: str, params: dict, computed, expected, provenance: str, ok: bool | None = None,
            **details) -> VerifyReport:
    if ok is None:
        ok = computed == expected
    return VerifyReport(check, params, computed, expected, provenance, "pass" if ok else "fail", details)


@contextmanager
def timed(reports: list):
    """Stamp wall time onto reports appended inside the block that carry no time yet."""
    start = time.perf_counter()
    n = len(reports)
    yield
    elapsed = time.perf_counter() - start
    for r in reports[n:]:
        if not r.wall_time:
            r.wall_time = elapsed


def dump_json(reports, timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], indent=2, sort_keys=True)


def dump_text(reports) -> str:
    return "\n".join(r.to_text() for r in reports)
