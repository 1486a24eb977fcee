"""Convergence of the lattice variables to the nodes of a positive measure.

For a positive measure with nodes x_1 > x_2 > .. > x_r, vt_n^l is expected to
tend to x_{n+1} and v_n^l to x_{n+1}^m as l grows.  These targets are treated
as hypotheses and checked against the traces; nothing here assumes them.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from hungryqd.errors import InvalidMeasure
from hungryqd.exact.scalar import EXACT, FLOAT
from hungryqd.measures import DiscreteMeasure, moments_from_measure
from hungryqd.qd.schemes import DHLV, DHQD, evolve_dhlv, evolve_dhqd, initial_window, to_float
from hungryqd.qd.tau import TauLattice

EXACT_L_CAP = 48
VARIABLES = ("vt", "v")


@dataclass
class EigenTrace:
    m: int
    n: int
    variable: str
    target: object
    mode: str
    ls: List[int] = field(default_factory=list)
    estimates: List[object] = field(default_factory=list)

    @property
    def errors(self) -> list:
        return [abs(e - self.target) for e in self.estimates]

    def rows(self):
        for l, est, err in zip(self.ls, self.estimates, self.errors):
            yield self.n, l, est, self.target, err


def _check_positive(measure: DiscreteMeasure):
    if len(set(measure.nodes)) != len(measure.nodes):
        raise InvalidMeasure("duplicate nodes")
    if not measure.positive:
        raise InvalidMeasure("the eigen demo needs positive nodes and weights with nodes strictly descending")


def qd_eigen(measure: DiscreteMeasure, m: int, l_max: int, variable: str = "vt", mode: str = FLOAT,
             allow_large_exact: bool = False) -> List[EigenTrace]:
    """Traces of vt_n^l (target x_{n+1}) or v_n^l (target x_{n+1}^m) for n < r, 0 <= l <= l_max.

    Exact mode reads determinant ratios directly.  Float mode takes the l < m
    starting values exactly, then runs the evolution in floats with the
    terminal row forced to zero (exact for an r-node measure).
    """
    if variable not in VARIABLES:
        raise ValueError(f"variable must be one of {VARIABLES}")
    _check_positive(measure)
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    r = measure.size
    if mode == EXACT and l_max > EXACT_L_CAP and not allow_large_exact:
        raise ValueError(f"exact traces are capped at l_max = {EXACT_L_CAP}; use float mode")
    span = l_max + m + 1 if mode == EXACT else 2 * m + 2
    count = span + (m + 1) * (r + 1) + 2
    lat = TauLattice(moments_from_measure(measure, count, m))
    targets = [x if variable == "vt" else x ** m for x in measure.nodes]
    if mode == FLOAT:
        targets = [float(t) for t in targets]
    traces = [EigenTrace(m, n, variable, targets[n], mode) for n in range(r)]

    if mode == EXACT:
        fn = lat.vt if variable == "vt" else lat.v
        for tr in traces:
            for l in range(l_max + 1):
                tr.ls.append(l)
                tr.estimates.append(fn(tr.n, l))
        return traces

    scheme = DHQD if variable == "vt" else DHLV
    win = to_float(initial_window(lat, scheme, r - 1, terminal=True))
    evolver = evolve_dhqd if scheme == DHQD else evolve_dhlv
    ev = evolver(win, l_max)
    for tr in traces:
        for l in range(l_max + 1):
            if (tr.n, l) in ev.a:
                tr.ls.append(l)
                tr.estimates.append(ev.a[tr.n, l])
    return traces


def _as_float(x) -> float:
    return float(x)


def empirical_rate(trace: EigenTrace, window: int = 10, floor_rel: float = 1e-12) -> float:
    """Geometric error rate from a log-linear least-squares fit over the last `window` usable steps.

    Steps whose error is at or below floor_rel * |target| are roundoff and are
    dropped.  A trace with no error above the floor reports rate 0.
    """
    if len(trace.estimates) < 3:
        raise ValueError("rate estimation needs a trace of length >= 3")
    floor = floor_rel * max(abs(_as_float(trace.target)), 1e-300)
    pts = [(l, _as_float(e)) for l, e in zip(trace.ls, trace.errors) if _as_float(e) > floor]
    pts = pts[-window:]
    if len(pts) < 2:
        return 0.0
    xs = [p[0] for p in pts]
    ys = [math.log(p[1]) for p in pts]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return math.exp(slope)


def node_gap_ratio(nodes, n: int) -> float:
    """Slowest adjacent node ratio seen by the n-th variable: max(x_{n+2}/x_{n+1}, x_{n+1}/x_n)."""
    ratios = []
    if n + 1 < len(nodes):
        ratios.append(nodes[n + 1] / nodes[n])
    if n >= 1:
        ratios.append(nodes[n] / nodes[n - 1])
    return float(max(ratios)) if ratios else 0.0


def final_relative_error(trace: EigenTrace):
    err = trace.errors[-1]
    t = trace.target
    if isinstance(err, Fraction):
        return err / abs(t)
    return err / abs(t)


def convergence_report(traces: List[EigenTrace], tol: float, nodes=None) -> dict:
    """Per-trace final relative error and empirical rate; a trace passes iff error < tol (strict)."""
    if not traces:
        raise ValueError("no traces")
    out = []
    for tr in traces:
        rel = final_relative_error(tr)
        if isinstance(rel, Fraction):
            passed = rel < Fraction(tol) if tol > 0 else False
            rel_f = float(rel)
        else:
            passed = rel < tol
            rel_f = rel
        entry = {
            "n": tr.n,
            "variable": tr.variable,
            "target": float(tr.target),
            "final_l": tr.ls[-1],
            "final_estimate": float(tr.estimates[-1]),
            "final_rel_error": rel_f,
            "rate": empirical_rate(tr) if len(tr.estimates) >= 3 else None,
            "passed": bool(passed),
        }
        if nodes is not None:
            entry["node_gap_ratio"] = node_gap_ratio(list(nodes), tr.n)
        out.append(entry)
    return {"tolerance": tol, "passed": all(e["passed"] for e in out), "traces": out}


def traces_to_csv(traces: List[EigenTrace]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "l", "estimate", "target", "abs_error"])
    for tr in traces:
        for n, l, est, tgt, err in tr.rows():
            w.writerow([n, l, repr(float(est)), repr(float(tgt)), repr(float(err))])
    return buf.getvalue()
