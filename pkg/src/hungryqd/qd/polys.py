"""Adjacent monic polynomials P_n^l, Q_n^l dual under <f, g> = sum f_i g_j c_{l+m i+j}."""

from dataclasses import dataclass, field
from typing import List, Sequence

from hungryqd.errors import LatticeBreakdown
from hungryqd.exact.linalg import det, solve
from hungryqd.qd.tau import TauLattice
from hungryqd.report import ResidualReport

FAMILIES = ("P", "Q")


class PolyX:
    """Polynomial in x with coefficients listed from the constant term up."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0:
            return not self.coeffs
        return all(abs(c) <= tol for c in self.coeffs)

    def __add__(self, other: "PolyX") -> "PolyX":
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyX([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: "PolyX") -> "PolyX":
        return self + other.scale(-1)

    def scale(self, c) -> "PolyX":
        return PolyX([c * a for a in self.coeffs])

    def xmul(self, power: int = 1) -> "PolyX":
        return PolyX([0] * power + list(self.coeffs)) if self.coeffs else PolyX()

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, PolyX) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyX({list(self.coeffs)})"


def _one(lattice: TauLattice):
    return lattice.tau(0, 0)


def build_poly(lattice: TauLattice, family: str, n: int, l: int) -> PolyX:
    """Monic degree-n polynomial by solving its n orthogonality conditions.

    P_n^l is orthogonal to x^j in the second slot and Q_n^l to x^i in the first,
    for all exponents below n.  P_{-1} = Q_{-1} = 0 and P_0 = Q_0 = 1.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    cache = lattice.__dict__.setdefault("_polys", {})
    key = (family, n, l)
    if key in cache:
        return cache[key]
    one = _one(lattice)
    if n < 0:
        poly = PolyX()
    elif n == 0:
        poly = PolyX([one])
    else:
        if lattice.tau(n, l) == 0:
            raise LatticeBreakdown(f"{family}_{n}", (n, l), "tau_n^l = 0")
        c, m = lattice.moments, lattice.m
        if family == "P":
            a = [[c[l + m * i + j] for i in range(n)] for j in range(n)]
            b = [-c[l + m * n + j] for j in range(n)]
        else:
            a = [[c[l + m * i + j] for j in range(n)] for i in range(n)]
            b = [-c[l + m * i + n] for i in range(n)]
        poly = PolyX(list(solve(a, b)) + [one])
    cache[key] = poly
    return poly


def build_poly_cofactor(lattice: TauLattice, family: str, n: int, l: int) -> PolyX:
    """Same polynomial from the bordered (n+1)x(n+1) determinant; independent oracle."""
    if n <= 0:
        return build_poly(lattice, family, n, l)
    c, m = lattice.moments, lattice.m
    tau = lattice.tau(n, l)
    if tau == 0:
        raise LatticeBreakdown(f"{family}_{n}", (n, l), "tau_n^l = 0")
    coeffs = []
    if family == "P":
        # rows i = 0..n: c_{l+mi+j} (j < n) then x^i; expand along the last column
        rows = [[c[l + m * i + j] for j in range(n)] for i in range(n + 1)]
        for i in range(n + 1):
            minor = rows[:i] + rows[i + 1:]
            sign = -1 if (i + n) % 2 else 1
            coeffs.append(sign * det(minor) / tau)
    else:
        # rows i < n: c_{l+mi+j} (j = 0..n) then the row 1, x, .., x^n
        rows = [[c[l + m * i + j] for j in range(n + 1)] for i in range(n)]
        for j in range(n + 1):
            minor = [r[:j] + r[j + 1:] for r in rows]
            sign = -1 if (j + n) % 2 else 1
            coeffs.append(sign * det(minor) / tau)
    return PolyX(coeffs)


def bilinear(lattice: TauLattice, p: PolyX, q: PolyX, l: int):
    """<p, q>^l = sum_ij p_i q_j c_{l+m i+j}, straight from the moments."""
    c, m = lattice.moments, lattice.m
    total = _one(lattice) * 0
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            if b:
                total += a * b * c[l + m * i + j]
    return total


def biorthogonality_report(lattice: TauLattice, N: int, l: int) -> ResidualReport:
    """All pairings <P_k^l, Q_n^l> for k, n <= N, and h_k^l against tau_{k+1}^l / tau_k^l."""
    rep = ResidualReport("biorthogonality", m=lattice.m, coords=("k", "n", "l"))
    hs = []
    for k in range(N + 1):
        pk = build_poly(lattice, "P", k, l)
        for n in range(N + 1):
            val = bilinear(lattice, pk, build_poly(lattice, "Q", n, l), l)
            if k != n:
                rep.record((k, n, l), val, detail="off-diagonal pairing")
                continue
            if val == 0:
                rep.record((k, n, l), 1, detail="vanishing diagonal h_k")
                continue
            oracle = lattice.tau(k + 1, l) / lattice.tau(k, l)
            rep.record((k, n, l), val - oracle, detail="h_k vs tau ratio")
            hs.append(val)
    rep.values["h"] = hs
    return rep


@dataclass
class RecurrenceExpansion:
    """Expansion of x P_n^l (or x^m Q_{n-m+1}^l) in the family, excluding the monic top term."""

    family: str
    n: int
    l: int
    m: int
    coeffs: List = field(default_factory=list)  # index i -> a_{n,i} or b_{n,i}, i = 0..n
    reconstruction: PolyX = None  # lhs minus the full expansion; zero when the solve is right

    def vanishing_violations(self) -> list:
        """Indices i <= n-m-1 whose coefficient fails to vanish."""
        return [i for i in range(0, self.n - self.m) if self.coeffs[i] != 0]


def recurrence_coeffs(lattice: TauLattice, family: str, n: int, l: int) -> RecurrenceExpansion:
    """Coefficients by projection onto the dual family: a_{n,i} = <x P_n, Q_i> / h_i.

    For Q the expanded polynomial is x^m Q_{n-m+1}^l and b_{n,i} = <P_i, x^m Q_{n-m+1}> / h_i.
    """
    m = lattice.m
    if family == "P":
        lhs = build_poly(lattice, "P", n, l).xmul()
    elif family == "Q":
        if n - m + 1 < 0:
            raise ValueError("x^m Q_{n-m+1} needs n >= m - 1")
        lhs = build_poly(lattice, "Q", n - m + 1, l).xmul(m)
    else:
        raise ValueError(f"family must be one of {FAMILIES}")
    dual = "Q" if family == "P" else "P"
    coeffs = []
    for i in range(n + 1):
        h = bilinear(lattice, build_poly(lattice, "P", i, l), build_poly(lattice, "Q", i, l), l)
        if h == 0:
            raise LatticeBreakdown(f"h_{i}", (i, l), "zero norm in projection")
        d = build_poly(lattice, dual, i, l)
        proj = bilinear(lattice, lhs, d, l) if family == "P" else bilinear(lattice, d, lhs, l)
        coeffs.append(proj / h)
    rest = lhs - build_poly(lattice, family, n + 1, l)
    for i, a in enumerate(coeffs):
        rest = rest - build_poly(lattice, family, i, l).scale(a)
    return RecurrenceExpansion(family, n, l, m, coeffs, rest)


def verify_linear_relations(lattice: TauLattice, site, which: str) -> ResidualReport:
    """Two-term relations linking the families across l and n.

    P-pair: x P_n^{l+m} = P_{n+1}^l + v_n^l P_n^l and P_{n+1}^l = P_{n+1}^{l+1} + w_n^l P_n^{l+1}.
    Q-pair: x Q_n^{l+1} = Q_{n+1}^l + vt_n^l Q_n^l and Q_n^l = Q_n^{l+m} + wt_{n-1}^l Q_{n-1}^{l+m}.
    """
    n, l = site
    m = lattice.m
    rep = ResidualReport(which, m=m, coords=("n", "l"))

    def poly(f, nn, ll):
        return build_poly(lattice, f, nn, ll)

    if which == "P-pair":
        r1 = poly("P", n, l + m).xmul() - poly("P", n + 1, l) - poly("P", n, l).scale(lattice.v(n, l))
        r2 = poly("P", n + 1, l) - poly("P", n + 1, l + 1) - poly("P", n, l + 1).scale(lattice.w(n, l))
    elif which == "Q-pair":
        r1 = poly("Q", n, l + 1).xmul() - poly("Q", n + 1, l) - poly("Q", n, l).scale(lattice.vt(n, l))
        r2 = poly("Q", n, l) - poly("Q", n, l + m) - poly("Q", n - 1, l + m).scale(lattice.wt(n - 1, l))
    else:
        raise ValueError("which must be 'P-pair' or 'Q-pair'")
    rep.record(site, r1, detail="x-shift relation")
    rep.record(site, r2, detail="l-shift relation")
    return rep
