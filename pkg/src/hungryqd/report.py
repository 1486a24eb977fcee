"""Residual bookkeeping shared by all verification suites."""

import json
from dataclasses import dataclass, field
from numbers import Rational
from typing import Dict, List, Optional

from hungryqd.exact.scalar import FLOAT_TOL, format_scalar


def residual_is_zero(r, tol: float = FLOAT_TOL) -> bool:
    """Zero test for scalars, coefficient maps/sequences and Laurent matrices.

    Exact values must be structurally zero; tol only applies to floats.
    """
    if hasattr(r, "is_zero"):
        return r.is_zero(0.0 if _all_exact(r) else tol)
    if isinstance(r, dict):
        return all(residual_is_zero(v, tol) for v in r.values())
    if isinstance(r, (list, tuple)):
        return all(residual_is_zero(v, tol) for v in r)
    if isinstance(r, Rational):
        return r == 0
    return abs(r) <= tol


def _all_exact(r) -> bool:
    entries = getattr(r, "entries", None)
    if callable(entries):
        return all(isinstance(c, Rational) for p in entries() for c in p.terms.values())
    coeffs = getattr(r, "coeffs", None)
    if coeffs is not None:
        return all(isinstance(c, Rational) for c in coeffs)
    return True


def summarize_residual(r):
    """Serialisable stand-in for a nonzero residual: the scalar itself, or the largest coefficient."""
    if isinstance(r, dict):
        items = [v for v in r.values() if not residual_is_zero(v, 0.0)]
        return summarize_residual(max(items, key=abs)) if items else "0"
    if isinstance(r, (list, tuple)):
        items = [v for v in r if not residual_is_zero(v, 0.0)]
        return summarize_residual(max(items, key=abs)) if items else "0"
    coeffs = getattr(r, "coeffs", None)
    if coeffs is not None:
        return summarize_residual(list(coeffs))
    if hasattr(r, "nonzero_entries"):
        nz = r.nonzero_entries()
        if not nz:
            return "0"
        p = r[nz[0]]
        return summarize_residual(list(p.terms.values()))
    return format_scalar(r)


@dataclass
class ResidualReport:
    """Outcome of checking one identity over a set of lattice sites."""

    name: str
    m: Optional[int] = None
    coords: tuple = ("k", "l")
    checked: int = 0
    skipped: int = 0
    failures: List[dict] = field(default_factory=list)
    breakdowns: List[dict] = field(default_factory=list)
    values: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def record(self, site, residual, tol: float = FLOAT_TOL, detail: str = "") -> bool:
        self.checked += 1
        if residual_is_zero(residual, tol):
            return True
        entry = dict(zip(self.coords, site))
        entry["residual"] = summarize_residual(residual)
        if detail:
            entry["detail"] = detail
        self.failures.append(entry)
        return False

    def skip(self, site=None) -> None:
        self.skipped += 1

    def breakdown(self, site, what: str) -> None:
        entry = dict(zip(self.coords, site))
        entry["what"] = what
        self.breakdowns.append(entry)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def degenerate(self) -> bool:
        """Nothing could be evaluated (every site broke down or was out of domain)."""
        return self.checked == 0

    def merge(self, other: "ResidualReport") -> "ResidualReport":
        self.checked += other.checked
        self.skipped += other.skipped
        self.failures.extend(other.failures)
        self.breakdowns.extend(other.breakdowns)
        self.notes.extend(n for n in other.notes if n not in self.notes)
        for key, val in other.values.items():
            if isinstance(val, list) and isinstance(self.values.get(key), list):
                self.values[key] = self.values[key] + val
            else:
                self.values[key] = val
        return self

    def to_json(self) -> dict:
        out = {
            "relation": self.name,
            "m": self.m,
            "sites_checked": self.checked,
            "sites_skipped": self.skipped,
            "failures": self.failures,
        }
        if self.breakdowns:
            out["breakdowns"] = self.breakdowns
        if self.values:
            out["values"] = {k: _jsonable(v) for k, v in self.values.items()}
        if self.notes:
            out["notes"] = self.notes
        return out

    def summary_line(self) -> str:
        state = "PASS" if self.passed and not self.degenerate else ("DEGENERATE" if self.passed else "FAIL")
        return (f"{state} {self.name} m={self.m} checked={self.checked} "
                f"skipped={self.skipped} failures={len(self.failures)}")


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (str, bool, int)) or v is None:
        return v
    return format_scalar(v)


@dataclass
class SuiteReport:
    """All identity reports of one command run, ordered by suite id."""

    config: dict
    reports: List[ResidualReport] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, report: ResidualReport) -> None:
        self.reports.append(report)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def degenerate(self) -> bool:
        return bool(self.reports) and all(r.degenerate for r in self.reports)

    def exit_code(self) -> int:
        if not self.passed:
            return 1
        if not self.reports or self.degenerate:
            return 2
        return 0

    def to_json(self, with_time: bool = True) -> dict:
        ordered = sorted(self.reports, key=lambda r: (r.name, r.m if r.m is not None else -1))
        out = {
            "config": self.config,
            "passed": self.passed,
            "reports": [r.to_json() for r in ordered],
        }
        if with_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def dumps(self, with_time: bool = True) -> str:
        return json.dumps(self.to_json(with_time), indent=2, sort_keys=True)
