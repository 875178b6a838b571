"""Residual reports: named checks with a formula tag, value, tolerance and verdict."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

LE, LT, GE, GT, RANGE, EQ = "<=", "<", ">=", ">", "in", "=="


@dataclass
class Check:
    name: str
    anchor: str
    value: float
    tolerance: float | tuple[float, float]
    relation: str = LE
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        v, t = self.value, self.tolerance
        if isinstance(v, float) and math.isnan(v):
            return False
        if self.relation == LE:
            return v <= t
        if self.relation == LT:
            return v < t
        if self.relation == GE:
            return v >= t
        if self.relation == GT:
            return v > t
        if self.relation == EQ:
            return v == t
        if self.relation == RANGE:
            return t[0] <= v <= t[1]
        raise ValueError(f"unknown relation {self.relation!r}")

    def as_dict(self) -> dict:
        tol = list(self.tolerance) if isinstance(self.tolerance, tuple) else self.tolerance
        return {"name": self.name, "anchor": self.anchor, "value": _num(self.value),
                "relation": self.relation, "tolerance": tol, "pass": self.passed}


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else repr(v)


@dataclass
class Report:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def timed(self, name: str, anchor: str, fn: Callable[[], float], tolerance, relation: str = LE) -> Check:
        t0 = time.perf_counter()
        value = float(fn())
        ms = 1e3 * (time.perf_counter() - t0)
        return self.add(Check(name, anchor, value, tolerance, relation, ms))

    def to_json(self) -> str:
        """Deterministic JSON; runtimes are kept out so reruns are byte-identical."""
        body = {"suite": self.suite, "seed": self.seed, "pass": self.passed,
                "entries": [c.as_dict() for c in self.checks]}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def timings_json(self) -> str:
        return json.dumps({c.name: round(c.runtime_ms, 3) for c in self.checks}, indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tol = f"[{c.tolerance[0]:g}, {c.tolerance[1]:g}]" if isinstance(c.tolerance, tuple) else f"{c.tolerance:g}"
            out.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} {c.relation} {tol}")
        return out
