"""Machine-readable run reports.

A report separates a deterministic ``body`` (version, config echo, check
records) from a ``meta`` block holding wall-clock data; re-running a suite
with an identical configuration must reproduce the body byte for byte.
JSON is canonical; CSV is a lossy projection keeping one value, the slack,
and the pass flag per record.
"""

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class CheckRecord:
    """One verified quantity: a stable check id, its numbers, and pass/fail."""

    name: str
    check: str
    values: dict
    passed: bool
    slack: Optional[float] = None
    tolerance: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "check": self.check,
            "values": self.values,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class Report:
    command: str
    config: dict
    version: str
    records: list = field(default_factory=list)
    duration_seconds: Optional[float] = None

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def body_dict(self) -> dict:
        return {
            "version": self.version,
            "command": self.command,
            "config": _jsonable(self.config),
            "records": [_jsonable(r.as_dict()) for r in self.records],
            "passed": self.all_passed,
        }


def _jsonable(x):
    """Make a value strict-JSON safe; numpy scalars are unwrapped and
    non-finite floats become strings."""
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render_body(report: Report) -> str:
    """The deterministic report body (compare this across runs)."""
    return json.dumps(report.body_dict(), indent=2, sort_keys=True, allow_nan=False)


def render_json(report: Report) -> str:
    meta = {"duration_seconds": report.duration_seconds}
    return json.dumps(
        {"body": report.body_dict(), "meta": meta},
        indent=2,
        sort_keys=True,
        allow_nan=False,
    )


def render_csv(report: Report) -> str:
    out = _io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["name", "check", "value", "slack", "passed"])
    for r in report.records:
        value = r.values.get("value", r.slack)
        writer.writerow(
            [r.name, r.check, _jsonable(value), _jsonable(r.slack), bool(r.passed)]
        )
    return out.getvalue()
