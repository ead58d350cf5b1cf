"""Structured residual reports.

Library verification routines and the CLI both speak in terms of
``CheckResult`` rows aggregated into a ``ResidualReport``.  The one invariant
everything downstream relies on: a row passes iff residual <= tolerance, and
that comparison happens in exactly one place (``check_row``).
"""

from __future__ import annotations

import csv
import io
import json
import numbers
import time
from dataclasses import dataclass, field, replace

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CheckResult:
    check: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    wall_time_s: float = 0.0
    details: dict = field(default_factory=dict)


def check_row(check: str, params: dict, residual, tolerance, wall_time_s: float = 0.0,
              **details) -> CheckResult:
    """Build a row, deriving the pass flag from residual <= tolerance."""
    residual = float(residual)
    tolerance = float(tolerance)
    return CheckResult(
        check=check,
        params=dict(params),
        residual=residual,
        tolerance=tolerance,
        passed=bool(residual <= tolerance),
        wall_time_s=float(wall_time_s),
        details=dict(details),
    )


def timed_check(check: str, params: dict, tolerance, fn) -> CheckResult:
    """Run ``fn() -> residual`` or ``fn() -> (residual, details)`` under a timer."""
    tic = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - tic
    residual, details = out if isinstance(out, tuple) else (out, {})
    return check_row(check, params, residual, tolerance, wall_time_s=elapsed, **details)


def _json_safe(val):
    """Recursively coerce to something the strict (allow_nan=False) encoder accepts."""
    if isinstance(val, dict):
        return {str(k): _json_safe(v) for k, v in val.items()}
    if isinstance(val, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in val]
    if isinstance(val, (bool, np.bool_)):
        return bool(val)
    if isinstance(val, (numbers.Integral, np.integer)):
        return int(val)
    if isinstance(val, (numbers.Real, np.floating)):
        f = float(val)
        return f if np.isfinite(f) else repr(f)
    if isinstance(val, (complex, np.complexfloating)):
        return {"re": _json_safe(val.real), "im": _json_safe(val.imag)}
    return val if val is None or isinstance(val, str) else str(val)


@dataclass
class ResidualReport:
    """Ordered collection of check rows plus the aggregate verdict."""

    checks: list

    @property
    def all_pass(self) -> bool:
        return all(row.passed for row in self.checks)

    @property
    def max_residual(self) -> float:
        return max((row.residual for row in self.checks), default=0.0)

    def sorted(self) -> "ResidualReport":
        """Deterministic row order: by check name, then by the parameter echo."""
        key = lambda row: (row.check, json.dumps(_json_safe(row.params), sort_keys=True))
        return ResidualReport(sorted(self.checks, key=key))

    def without_timing(self) -> "ResidualReport":
        return ResidualReport([replace(row, wall_time_s=0.0) for row in self.checks])

    def to_json_dict(self, command: str | None = None, config: dict | None = None,
                     wall_time_s: float = 0.0) -> dict:
        doc = {
            "schema": SCHEMA_VERSION,
            "checks": [
                {
                    "check": row.check,
                    "params": _json_safe(row.params),
                    "residual": _json_safe(row.residual),
                    "tolerance": _json_safe(row.tolerance),
                    "passed": row.passed,
                    "wall_time_s": _json_safe(row.wall_time_s),
                    "details": _json_safe(row.details),
                }
                for row in self.checks
            ],
            "all_pass": self.all_pass,
            "max_residual": _json_safe(self.max_residual),
            "wall_time_s": _json_safe(wall_time_s),
        }
        if command is not None:
            doc["command"] = command
        if config is not None:
            doc["config"] = _json_safe(config)
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(**kwargs), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def write_json(self, path, **kwargs) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json(**kwargs))

    def to_csv(self) -> str:
        """Flat projection of the rows; params/details stay JSON-encoded cells."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "residual", "tolerance", "passed", "wall_time_s", "params", "details"])
        for row in self.checks:
            writer.writerow(
                [
                    row.check,
                    repr(row.residual),
                    repr(row.tolerance),
                    row.passed,
                    repr(row.wall_time_s),
                    json.dumps(_json_safe(row.params), sort_keys=True),
                    json.dumps(_json_safe(row.details), sort_keys=True),
                ]
            )
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())
