"""The ClaimReport record and its JSON / CSV projections."""

from __future__ import annotations

import csv
import io
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

SCHEMA_FIELDS = (
    "claim_name",
    "params",
    "lhs",
    "rhs",
    "satisfied",
    "premise_satisfied",
    "seed",
    "runtime_ms",
    "details",
)


def exact_str(x) -> str:
    """Exact rendering of an integer or rational: '12', '-7/3'."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return str(int(x))


def real_str(x: float) -> str:
    return repr(float(x))


@dataclass
class ClaimReport:
    claim_name: str
    params: dict[str, Any]
    lhs: str
    rhs: str
    satisfied: bool
    premise_satisfied: bool | None = None
    seed: int | None = None
    runtime_ms: int = 0
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        """A claim counts as failed only when its premise holds (or is absent)."""
        return not self.satisfied and self.premise_satisfied is not False

    def to_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in SCHEMA_FIELDS}

    def to_json(self, include_runtime: bool = True) -> str:
        d = self.to_dict()
        if not include_runtime:
            d.pop("runtime_ms")
        return json.dumps(d, sort_keys=False, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return exact_str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


@contextmanager
def timed():
    """Yield a one-slot list that receives elapsed milliseconds on exit."""
    box = [0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int(round((time.perf_counter() - t0) * 1000))


def dumps_reports(reports: Iterable[ClaimReport], fmt: str = "json",
                  include_runtime: bool = True) -> str:
    reports = list(reports)
    if fmt == "json":
        body = ",\n".join("  " + r.to_json(include_runtime) for r in reports)
        return "[\n" + body + "\n]\n" if reports else "[]\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = [c for c in SCHEMA_FIELDS if include_runtime or c != "runtime_ms"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in reports:
            d = r.to_dict()
            row = []
            for c in cols:
                v = d[c]
                if isinstance(v, dict):
                    v = json.dumps(v, default=_jsonable)
                elif v is None:
                    v = ""
                row.append(v)
            w.writerow(row)
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def loads_reports(text: str) -> list[ClaimReport]:
    return [ClaimReport(**d) for d in json.loads(text)]


SLACK = 2.0**-40


def le_with_slack(lhs, rhs: float) -> bool:
    """Exact lhs <= real rhs, allowing 2^-40 (relative to max(1, rhs)) for rounding in rhs."""
    return Fraction(lhs) <= Fraction(rhs) + Fraction(SLACK) * max(1, Fraction(rhs))
