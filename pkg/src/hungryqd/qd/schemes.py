"""The dhQD and dhLV-related schemes: residual checks on tau lattices and forward evolution."""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from hungryqd.errors import LatticeBreakdown, OutOfDomain
from hungryqd.exact.scalar import format_scalar
from hungryqd.qd.tau import TauLattice
from hungryqd.report import ResidualReport

DHLV = "dhlv"
DHQD = "dhqd"
SCHEMES = (DHLV, DHQD)

ORACLE = "oracle"
EVOLVED = "evolved"


def _schemes_names(scheme):
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")


def scheme_residuals(lattice: TauLattice, scheme: str, n: int, l: int) -> Tuple:
    """(product rule, sum rule) residuals at (n, l), with w_{-1} = wt_{-1} = 0."""
    _schemes_names(scheme)
    m = lattice.m
    if scheme == DHLV:
        v, w = lattice.v, lattice.w
        r1 = w(n, l + m) * v(n, l + 1) - w(n, l) * v(n + 1, l)
        r2 = w(n - 1, l + m) + v(n, l + 1) - w(n, l) - v(n, l)
    else:
        v, w = lattice.vt, lattice.wt
        r1 = w(n, l + 1) * v(n, l + m) - w(n, l) * v(n + 1, l)
        r2 = w(n - 1, l + 1) + v(n, l + m) - w(n, l) - v(n, l)
    return r1, r2


def verify_scheme(lattice: TauLattice, scheme: str, n_max: int, l_max: int) -> ResidualReport:
    """Both scheme equations on every (n, l) with n <= n_max, l <= l_max."""
    rep = ResidualReport(scheme, m=lattice.m, coords=("n", "l"))
    for n in range(n_max + 1):
        for l in range(l_max + 1):
            try:
                r1, r2 = scheme_residuals(lattice, scheme, n, l)
            except LatticeBreakdown as exc:
                rep.breakdown(exc.site, exc.what)
                continue
            rep.record((n, l), r1, detail="product rule")
            rep.record((n, l), r2, detail="sum rule")
    return rep


def qd_rhombus_residuals(q, e, k: int, l: int) -> Tuple:
    """Classical rhombus rules for callables q(k, l), e(k, l)."""
    r1 = e(k, l + 1) * q(k, l + 1) - e(k, l) * q(k + 1, l)
    r2 = e(k, l + 1) + q(k + 1, l + 1) - e(k + 1, l) - q(k + 1, l)
    return r1, r2


def verify_qd_rhombus(lattice: TauLattice, k_max: int, l_max: int) -> ResidualReport:
    """The m = 1 dhQD lattice read as q_k = vt_k, e_k = wt_k must satisfy the rhombus rules."""
    if lattice.m != 1:
        raise ValueError("the rhombus rules are the m = 1 reduction")
    rep = ResidualReport("qd-rhombus", m=1, coords=("k", "l"))
    for k in range(k_max + 1):
        for l in range(l_max + 1):
            try:
                r1, r2 = qd_rhombus_residuals(lattice.vt, lattice.wt, k, l)
            except LatticeBreakdown as exc:
                rep.breakdown(exc.site, exc.what)
                continue
            rep.record((k, l), r1)
            rep.record((k, l), r2)
    return rep


def hirota_check(lattice: TauLattice, k_max: int, l_max: int) -> ResidualReport:
    """tau_{k+1}^{l-1} tau_{k-1}^{l+1} - tau_k^{l-1} tau_k^{l+1} + (tau_k^l)^2 = 0 for 1 <= k, 1 <= l."""
    if lattice.m != 1:
        raise ValueError("the bilinear Toda identity needs m = 1")
    t = lattice.tau
    rep = ResidualReport("toda-bilinear", m=1, coords=("k", "l"))
    for k in range(1, k_max + 1):
        for l in range(1, l_max + 1):
            r = t(k + 1, l - 1) * t(k - 1, l + 1) - t(k, l - 1) * t(k, l + 1) + t(k, l) ** 2
            rep.record((k, l), r)
    return rep


@dataclass
class SchemeWindow:
    """Scheme variables on a rectangle of (n, l) cells.

    For dhQD ``a`` holds vt and ``b`` holds wt; for dhLV ``a`` holds v and ``b`` w.
    ``terminal`` marks data from an r-node measure where b_{r-1} = 0 for every l,
    which closes the recursion at n = r - 1 instead of letting it shrink.
    """

    scheme: str
    m: int
    n_max: int
    l_max: int
    a: Dict[Tuple[int, int], object] = field(default_factory=dict)
    b: Dict[Tuple[int, int], object] = field(default_factory=dict)
    origin: str = ORACLE
    terminal: bool = False

    def names(self) -> Tuple[str, str]:
        return ("vt", "wt") if self.scheme == DHQD else ("v", "w")

    def b_at(self, n: int, l: int):
        if n == -1:
            return 0
        if self.terminal and n == self.n_max:
            return 0
        return self.b[n, l]

    def to_json(self) -> dict:
        an, bn = self.names()

        def grid(d):
            ls = sorted({l for _, l in d})
            out = []
            for n in range(self.n_max + 1):
                out.append([format_scalar(d[n, l]) if (n, l) in d else None for l in ls])
            return out

        return {"m": self.m, "scheme": self.scheme, "origin": self.origin,
                "vars": {an: grid(self.a), bn: grid(self.b)}}


def oracle_window(lattice: TauLattice, scheme: str, n_max: int, l_max: int) -> SchemeWindow:
    """Determinant-ratio values on the full window (breakdown propagates)."""
    _schemes_names(scheme)
    win = SchemeWindow(scheme, lattice.m, n_max, l_max, origin=ORACLE)
    fa, fb = (lattice.vt, lattice.wt) if scheme == DHQD else (lattice.v, lattice.w)
    for n in range(n_max + 1):
        for l in range(l_max + 1):
            win.a[n, l] = fa(n, l)
            win.b[n, l] = fb(n, l)
    return win


def initial_window(lattice: TauLattice, scheme: str, n_max: int, terminal: bool = False) -> SchemeWindow:
    """Starting data for evolution, from determinant ratios.

    dhQD needs vt_n^l for l < m and wt_n^0; dhLV needs v_n^0 and w_n^l for l < m.
    With ``terminal`` the top row b_{n_max} is forced to zero (exact when the
    measure has n_max + 1 nodes).
    """
    _schemes_names(scheme)
    m = lattice.m
    win = SchemeWindow(scheme, m, n_max, -1, origin=ORACLE, terminal=terminal)
    fa, fb = (lattice.vt, lattice.wt) if scheme == DHQD else (lattice.v, lattice.w)
    a_ls, b_ls = (range(m), range(1)) if scheme == DHQD else (range(1), range(m))
    for n in range(n_max + 1):
        for l in a_ls:
            win.a[n, l] = fa(n, l)
        if terminal and n == n_max:
            continue
        for l in b_ls:
            win.b[n, l] = fb(n, l)
    return win


def _convert(win: SchemeWindow, conv) -> SchemeWindow:
    out = SchemeWindow(win.scheme, win.m, win.n_max, win.l_max, origin=win.origin, terminal=win.terminal)
    out.a = {k: conv(v) for k, v in win.a.items()}
    out.b = {k: conv(v) for k, v in win.b.items()}
    return out


def to_float(win: SchemeWindow) -> SchemeWindow:
    return _convert(win, float)


def evolve_dhqd(initial: SchemeWindow, l_max: int) -> SchemeWindow:
    """Step the dhQD equations upward in l, one sweep for each l = 0..l_max.

    Per sweep at fixed l, for n ascending:
        vt_n^{l+m} = wt_n^l + vt_n^l - wt_{n-1}^{l+1}
        wt_n^{l+1} = wt_n^l * vt_{n+1}^l / vt_n^{l+m}
    Without a terminal row each sweep loses the top n (staircase).
    """
    if initial.scheme != DHQD:
        raise ValueError("initial window is not dhQD data")
    m, N = initial.m, initial.n_max
    out = SchemeWindow(DHQD, m, N, l_max, dict(initial.a), dict(initial.b), origin=EVOLVED,
                       terminal=initial.terminal)
    vt, wt = out.a, out.b
    for l in range(l_max + 1):
        for n in range(N + 1):
            if (n, l) not in vt or (n, l) not in wt and not (out.terminal and n == N):
                break
            if n > 0 and (n - 1, l + 1) not in wt:
                break
            new_v = out.b_at(n, l) + vt[n, l] - out.b_at(n - 1, l + 1)
            vt[n, l + m] = new_v
            if out.terminal and n == N:
                continue
            if (n + 1, l) not in vt:
                break
            if new_v == 0:
                raise LatticeBreakdown("vt (evolution)", (n, l + m), "zero divisor")
            wt[n, l + 1] = wt[n, l] * vt[n + 1, l] / new_v
    return out


def evolve_dhlv(initial: SchemeWindow, l_max: int) -> SchemeWindow:
    """Step the dhLV-related equations upward in l, one sweep for each l = 0..l_max.

    Per sweep at fixed l, for n ascending:
        v_n^{l+1} = w_n^l + v_n^l - w_{n-1}^{l+m}
        w_n^{l+m} = w_n^l * v_{n+1}^l / v_n^{l+1}
    """
    if initial.scheme != DHLV:
        raise ValueError("initial window is not dhLV data")
    m, N = initial.m, initial.n_max
    out = SchemeWindow(DHLV, m, N, l_max, dict(initial.a), dict(initial.b), origin=EVOLVED,
                       terminal=initial.terminal)
    v, w = out.a, out.b
    for l in range(l_max + 1):
        for n in range(N + 1):
            if (n, l) not in v or (n, l) not in w and not (out.terminal and n == N):
                break
            if n > 0 and (n - 1, l + m) not in w:
                break
            new_v = out.b_at(n, l) + v[n, l] - out.b_at(n - 1, l + m)
            v[n, l + 1] = new_v
            if out.terminal and n == N:
                continue
            if (n + 1, l) not in v:
                break
            if new_v == 0:
                raise LatticeBreakdown("v (evolution)", (n, l + 1), "zero divisor")
            w[n, l + m] = w[n, l] * v[n + 1, l] / new_v
    return out


def compare_windows(evolved: SchemeWindow, oracle_lattice: TauLattice, n_max: int, l_max: int,
                    tol: float = 0.0) -> ResidualReport:
    """Cell-by-cell difference between evolved values and determinant ratios on n <= n_max, l <= l_max."""
    rep = ResidualReport(f"{evolved.scheme}-evolution", m=evolved.m, coords=("n", "l"))
    an, bn = evolved.names()
    for (store, name) in ((evolved.a, an), (evolved.b, bn)):
        fn = getattr(oracle_lattice, name)
        for n in range(n_max + 1):
            for l in range(l_max + 1):
                if (n, l) not in store:
                    rep.skip((n, l))
                    continue
                try:
                    ref = fn(n, l)
                except (LatticeBreakdown, OutOfDomain) as exc:
                    rep.breakdown((n, l), str(exc))
                    continue
                rep.record((n, l), store[n, l] - ref, tol=tol, detail=name)
    return rep


def telescoping_residual(lattice: TauLattice, N: int, l: int):
    """Summed sum rule over n = 0..N, as an identity on determinant ratios.

    Returns sum_{n<N} (wt_n^{l+1} - wt_n^l) - (wt_N^l + sum_n vt_n^l - sum_n vt_n^{l+m}).
    """
    m = lattice.m
    vt, wt = lattice.vt, lattice.wt
    lhs = sum((wt(n, l + 1) - wt(n, l) for n in range(N)), lattice.tau(0, 0) * 0)
    rhs = wt(N, l) + sum(vt(n, l) - vt(n, l + m) for n in range(N + 1))
    return lhs - rhs


def evolution_headroom(n_max: int, l_max: int) -> int:
    """Rows of starting data that let a non-terminal evolution reach every cell n <= n_max, l <= l_max."""
    return n_max + l_max + 2


def verify_evolution(lattice: TauLattice, scheme: str, n_max: int, l_max: int) -> ResidualReport:
    """Evolve from l < m data with enough extra rows for the staircase, then compare the full window."""
    rows = evolution_headroom(n_max, l_max)
    init = initial_window(lattice, scheme, rows)
    evolver = evolve_dhqd if scheme == DHQD else evolve_dhlv
    try:
        ev = evolver(init, l_max)
    except LatticeBreakdown as exc:
        rep = ResidualReport(f"{scheme}-evolution", m=lattice.m, coords=("n", "l"))
        rep.breakdown(exc.site, exc.what)
        return rep
    rep = compare_windows(ev, lattice, n_max, l_max)
    if rep.skipped:
        rep.notes.append(f"{rep.skipped} cells not reached by the evolution")
        rep.record((None, None), 1, detail="evolution did not cover the window")
    return rep
