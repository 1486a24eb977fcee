"""Table of the elliptic determinant and polynomial relations, evaluated as exact residuals.

Every relation is asserted only where all determinants it touches have order
>= 1, all polynomials have order >= 1 and every superscript is >= 2.  The
order-0 values are conventions that no single choice makes consistent across
the whole table, so those sites are reported as skipped instead.
"""

from typing import Callable, Dict, Iterable, NamedTuple

from hungryqd.elliptic.families import EllipticLattice, EllipticPoly, combine
from hungryqd.errors import LatticeBreakdown, OutOfDomain
from hungryqd.report import ResidualReport


class Guarded:
    """Domain-checked view of an EllipticLattice plus the derived variables U, V, W, X, Y, Gamma."""

    def __init__(self, lat: EllipticLattice):
        self.lat = lat
        self.m = lat.m

    # determinants
    def _d(self, fam, k, l):
        if k < 1:
            raise OutOfDomain(f"{fam}_{k}^{l}: order below 1")
        return self.lat.det(fam, k, l)

    def D(self, k, l):
        return self._d("Delta", k, l)

    def Th(self, k, l):
        return self._d("Theta", k, l)

    def Pi(self, k, l):
        return self._d("Pi", k, l)

    def Sg(self, k, l):
        return self._d("Sigma", k, l)

    # polynomials
    def _p(self, fam, k, l):
        if k < 1:
            raise OutOfDomain(f"{fam}_{k}^{l}: order below 1")
        return self.lat.poly(fam, k, l)

    def P(self, k, l):
        return self._p("P", k, l)

    def Q(self, k, l):
        return self._p("Q", k, l)

    def T(self, k, l):
        return self._p("T", k, l)

    def S(self, k, l):
        return self._p("S", k, l)

    @staticmethod
    def ratio(what, site, num, den):
        if den == 0:
            raise LatticeBreakdown(what, site, "zero determinant in denominator")
        return num / den

    # lattice variables
    def U(self, k, l):
        D, m = self.D, self.m
        return self.ratio("U", (k, l), D(k + 1, l) * D(k - 1, l + m), D(k, l) * D(k, l + m))

    def V(self, k, l):
        D, m = self.D, self.m
        return self.ratio("V", (k, l), D(k, l) * D(k, l + m + 2), D(k + 1, l) * D(k - 1, l + m + 2))

    def W(self, k, l):
        D, m = self.D, self.m
        return self.ratio("W", (k, l), D(k, l + m) * D(k, l + 2), D(k + 1, l) * D(k - 1, l + m + 2))

    def X(self, k, l):
        D, m = self.D, self.m
        return self.ratio("X", (k, l), D(k, l) * D(k - 1, l + 2 * m), D(k - 1, l + m) * D(k, l + m))

    def Y(self, k, l):
        D, m = self.D, self.m
        num = D(k, l) * D(k - 3, l + 2 * m + 2) - D(k - 1, l) * D(k - 2, l + 2 * m + 2)
        return self.ratio("Y", (k, l), num, D(k - 2, l + m + 2) * D(k - 1, l + m))

    def Gamma(self, k, l):
        return self.ratio("Gamma", (k, l), self.Th(k, l), self.D(k, l + self.m))


class Relation(NamedTuple):
    id: str
    kind: str  # "poly" or "scalar"
    doc: str
    fn: Callable


def _r13(g, k, l):
    m = g.m
    return combine((1, g.P(k, l)), (-1, g.P(k - 2, l + m + 2).xmul()),
                   (g.V(k - 2, l), g.P(k - 1, l)), (-g.W(k - 2, l), g.P(k - 1, l + m)))


def _r14(g, k, l):
    m = g.m
    return combine((1, g.P(k, l)), (-1, g.P(k, l + m)), (-g.U(k - 1, l), g.P(k - 1, l + m)))


def _r15(g, k, l):
    D, Th = g.D, g.Th
    a = g.ratio("R15", (k, l), D(k - 2, l) * Th(k - 2, l + 2), D(k - 1, l) * Th(k - 3, l + 2))
    b = g.ratio("R15", (k, l), D(k - 2, l + 2) * Th(k - 2, l), D(k - 1, l) * Th(k - 3, l + 2))
    return combine((1, g.P(k, l)), (-1, g.Q(k - 2, l + 2).xmul()), (a, g.P(k - 1, l)), (-b, g.Q(k - 1, l)))


def _r16(g, k, l):
    D, Th, m = g.D, g.Th, g.m
    a = g.ratio("R16", (k, l), D(k, l) * D(k - 2, l + 2 * m), D(k - 1, l + m) * Th(k - 1, l))
    return combine((1, g.Q(k, l)), (-1, g.P(k, l + m)), (-a, g.P(k - 1, l + 2 * m)))


def _r17(g, k, l):
    D, Th = g.D, g.Th
    a = g.ratio("R17", (k, l), D(k, l) * Th(k - 2, l), D(k - 1, l) * Th(k - 1, l))
    return combine((1, g.Q(k, l)), (-1, g.P(k, l)), (a, g.Q(k - 1, l)))


def _r18(g, k, l):
    D, Th, m = g.D, g.Th, g.m
    return (D(k, l) * D(k - 3, l + 2 * m + 2)
            - (D(k - 1, l) * D(k - 2, l + 2 * m + 2) - Th(k - 1, l) * D(k - 2, l + m + 2)
               + D(k - 1, l + m) * Th(k - 2, l + 2)))


def _r19(g, k, l):
    D, Th, m = g.D, g.Th, g.m
    return D(k, l) * D(k - 1, l + 2 * m) - (Th(k, l) * D(k - 1, l + m) - D(k, l + m) * Th(k - 1, l))


def _a26(g, k, l):
    D, Pi, m = g.D, g.Pi, g.m
    a = g.ratio("A26", (k, l), D(k - 2, l + m) * Pi(k - 1, l), D(k - 1, l) * Pi(k - 2, l + m))
    return combine((1, g.P(k, l)), (-1, g.T(k - 1, l + m)), (a, g.P(k - 1, l + m)))


def _a27(g, k, l):
    D, Pi = g.D, g.Pi
    a = g.ratio("A27", (k, l), D(k - 2, l) * Pi(k - 1, l), D(k - 1, l) * Pi(k - 2, l))
    return combine((1, g.P(k, l)), (-1, g.T(k - 1, l)), (a, g.P(k - 1, l)))


def _a28(g, k, l):
    D, Pi, Th, Sg, m = g.D, g.Pi, g.Th, g.Sg, g.m
    a = g.ratio("A28", (k, l), D(k - 2, l + 2 * m) * Sg(k - 1, l), Pi(k - 2, l + 2 * m) * Th(k - 1, l))
    return combine((1, g.Q(k, l)), (-1, g.T(k - 1, l + 2 * m)), (a, g.P(k - 1, l + 2 * m)))


def _a30(g, k, l):
    D, Pi, m = g.D, g.Pi, g.m
    return D(k, l) * Pi(k - 2, l + m) - (D(k - 1, l) * Pi(k - 1, l + m) - D(k - 1, l + m) * Pi(k - 1, l))


def _a31(g, k, l):
    Th, Sg = g.Th, g.Sg
    a = g.ratio("A31", (k, l), Sg(k - 1, l) * Th(k - 2, l), Sg(k - 2, l) * Th(k - 1, l))
    return combine((1, g.Q(k, l)), (-1, g.S(k - 1, l)), (a, g.Q(k - 1, l)))


def _a32(g, k, l):
    D, Pi, Th, Sg = g.D, g.Pi, g.Th, g.Sg
    a = g.ratio("A32", (k, l), Pi(k - 1, l) * Th(k - 2, l), Sg(k - 2, l) * D(k - 1, l))
    return combine((1, g.P(k, l)), (-1, g.S(k - 1, l)), (a, g.Q(k - 1, l)))


def _a33(g, k, l):
    D, Pi, Th, Sg = g.D, g.Pi, g.Th, g.Sg
    return D(k, l) * Sg(k - 2, l) - (D(k - 1, l) * Sg(k - 1, l) - Pi(k - 1, l) * Th(k - 1, l))


def _a34(g, k, l):
    D, Pi, Th, Sg, m = g.D, g.Pi, g.Th, g.Sg, g.m
    return D(k, l) * Pi(k - 2, l + 2 * m) - (Pi(k - 1, l + m) * Th(k - 1, l) - Sg(k - 1, l) * D(k - 1, l + m))


def _a35(g, k, l):
    D, Pi, Th, Sg, m = g.D, g.Pi, g.Th, g.Sg, g.m
    return Th(k, l) * Pi(k - 2, l + 2 * m) - (Pi(k - 1, l + 2 * m) * Th(k - 1, l) - Sg(k - 1, l) * D(k - 1, l + 2 * m))


def _a36(g, k, l):
    D, Pi, Th, m = g.D, g.Pi, g.Th, g.m
    return (D(k - 1, l + m) * (Pi(k - 1, l + 2 * m) * Th(k - 1, l) - Th(k, l) * Pi(k - 2, l + 2 * m))
            - D(k - 1, l + 2 * m) * (Pi(k - 1, l + m) * Th(k - 1, l) - D(k, l) * Pi(k - 2, l + 2 * m)))


def _a37(g, k, l):
    # Sigma eliminated between the two Sigma relations; left-hand term uses Pi_{k-2}^{l+2m}
    D, Pi, Th, m = g.D, g.Pi, g.Th, g.m
    lhs = D(k - 1, l + m) * (Pi(k - 1, l + 2 * m) * Th(k - 1, l) - Th(k, l) * Pi(k - 2, l + 2 * m))
    rhs = (Th(k - 1, l) * (D(k - 1, l + m) * Pi(k - 1, l + 2 * m) - D(k, l + m) * Pi(k - 2, l + 2 * m))
           - D(k - 1, l + 2 * m) * D(k, l) * Pi(k - 2, l + 2 * m))
    return lhs - rhs


def _a37_uncorrected(g, k, l):
    # the same identity with Delta_{k-2}^{l+2m} in the left-hand term; fails, kept for the record
    D, Pi, Th, m = g.D, g.Pi, g.Th, g.m
    lhs = D(k - 1, l + m) * (Pi(k - 1, l + 2 * m) * Th(k - 1, l) - Th(k, l) * D(k - 2, l + 2 * m))
    rhs = (Th(k - 1, l) * (D(k - 1, l + m) * Pi(k - 1, l + 2 * m) - D(k, l + m) * Pi(k - 2, l + 2 * m))
           - D(k - 1, l + 2 * m) * D(k, l) * Pi(k - 2, l + 2 * m))
    return lhs - rhs


RELATIONS: Dict[str, Relation] = {r.id: r for r in [
    Relation("R13", "poly", "P_k^l = x P_{k-2}^{l+m+2} - V_{k-2}^l P_{k-1}^l + W_{k-2}^l P_{k-1}^{l+m}", _r13),
    Relation("R14", "poly", "P_k^l = P_k^{l+m} + U_{k-1}^l P_{k-1}^{l+m}", _r14),
    Relation("R15", "poly", "P_k^l in terms of x Q_{k-2}^{l+2}, P_{k-1}^l, Q_{k-1}^l", _r15),
    Relation("R16", "poly", "Q_k^l in terms of P_k^{l+m}, P_{k-1}^{l+2m}", _r16),
    Relation("R17", "poly", "Q_k^l in terms of P_k^l, Q_{k-1}^l", _r17),
    Relation("R18", "scalar", "Delta_k^l Delta_{k-3}^{l+2m+2} expansion with Theta", _r18),
    Relation("R19", "scalar", "Delta_k^l Delta_{k-1}^{l+2m} = Theta_k^l Delta_{k-1}^{l+m} - Delta_k^{l+m} Theta_{k-1}^l", _r19),
    Relation("A26", "poly", "P_k^l = T_{k-1}^{l+m} - c P_{k-1}^{l+m}", _a26),
    Relation("A27", "poly", "P_k^l = T_{k-1}^l - c P_{k-1}^l", _a27),
    Relation("A28", "poly", "Q_k^l = T_{k-1}^{l+2m} - c P_{k-1}^{l+2m}", _a28),
    Relation("A30", "scalar", "Delta_k^l Pi_{k-2}^{l+m} = Delta_{k-1}^l Pi_{k-1}^{l+m} - Delta_{k-1}^{l+m} Pi_{k-1}^l", _a30),
    Relation("A31", "poly", "Q_k^l = S_{k-1}^l - c Q_{k-1}^l", _a31),
    Relation("A32", "poly", "P_k^l = S_{k-1}^l - c Q_{k-1}^l", _a32),
    Relation("A33", "scalar", "Delta_k^l Sigma_{k-2}^l = Delta_{k-1}^l Sigma_{k-1}^l - Pi_{k-1}^l Theta_{k-1}^l", _a33),
    Relation("A34", "scalar", "Delta_k^l Pi_{k-2}^{l+2m} = Pi_{k-1}^{l+m} Theta_{k-1}^l - Sigma_{k-1}^l Delta_{k-1}^{l+m}", _a34),
    Relation("A35", "scalar", "Theta_k^l Pi_{k-2}^{l+2m} = Pi_{k-1}^{l+2m} Theta_{k-1}^l - Sigma_{k-1}^l Delta_{k-1}^{l+2m}", _a35),
    Relation("A36", "scalar", "Sigma eliminated between A34 and A35", _a36),
    Relation("A37", "scalar", "A36 rewritten with A30", _a37),
]}

RELATION_IDS = tuple(RELATIONS)


def relation_residual(lat: EllipticLattice, rid: str, k: int, l: int):
    """Exact LHS - RHS; raises OutOfDomain or LatticeBreakdown when the site is not evaluable."""
    try:
        rel = RELATIONS[rid]
    except KeyError:
        raise ValueError(f"unknown relation id {rid!r}")
    return rel.fn(Guarded(lat), k, l)


def verify_relation(lat: EllipticLattice, rid: str, k: int, l: int) -> ResidualReport:
    rep = ResidualReport(rid, m=lat.m)
    _check_site(rep, lambda: relation_residual(lat, rid, k, l), (k, l))
    return rep


def _check_site(rep: ResidualReport, compute, site, tol: float = 0.0):
    try:
        r = compute()
    except OutOfDomain:
        rep.skip(site)
        return None
    except LatticeBreakdown as exc:
        rep.breakdown(site, exc.what)
        return None
    rep.record(site, r, tol=tol)
    return r


def relation_suite(lat: EllipticLattice, ids: Iterable[str], k_max: int, l_min: int, l_max: int) -> Dict[str, ResidualReport]:
    """Every relation in ids over 0 <= k <= k_max, l_min <= l <= l_max."""
    g = Guarded(lat)
    out = {}
    for rid in ids:
        rel = RELATIONS[rid]
        rep = ResidualReport(rid, m=lat.m)
        for k in range(k_max + 1):
            for l in range(l_min, l_max + 1):
                _check_site(rep, lambda: rel.fn(g, k, l), (k, l))
        out[rid] = rep
    return out


def uncorrected_a37_residual(lat: EllipticLattice, k: int, l: int):
    """The uncorrected form of A37, which does not vanish in general."""
    return _a37_uncorrected(Guarded(lat), k, l)


def is_poly(r) -> bool:
    return isinstance(r, EllipticPoly)
