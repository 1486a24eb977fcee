"""(m+1)x(m+1) Lax pairs for the dhLV-related system and dhQD, spectral parameter lam."""

from fractions import Fraction

from hungryqd.errors import LatticeBreakdown, LaxConstructionError
from hungryqd.exact.laurent import LaurentMatrix
from hungryqd.qd.polys import build_poly
from hungryqd.qd.schemes import DHLV, DHQD, SCHEMES
from hungryqd.qd.tau import TauLattice
from hungryqd.report import ResidualReport


class PerturbedVars:
    """Variable source equal to a lattice except at listed cells: {(kind, n, l): delta}."""

    def __init__(self, lattice: TauLattice, deltas: dict):
        self.lattice = lattice
        self.m = lattice.m
        self.deltas = dict(deltas)

    def _get(self, kind, n, l):
        return getattr(self.lattice, kind)(n, l) + self.deltas.get((kind, n, l), 0)

    def v(self, n, l):
        return self._get("v", n, l)

    def w(self, n, l):
        return self._get("w", n, l)

    def vt(self, n, l):
        return self._get("vt", n, l)

    def wt(self, n, l):
        return self._get("wt", n, l)


def _zeros(s, zero):
    return [[zero] * s for _ in range(s)]


def lax_parts(src, scheme: str, n: int, l: int) -> dict:
    """Scalar parts {"L0", "L1", "M0", "Mm1"}: L = L0 + lam L1, M = M0 + lam^-1 Mm1."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    m = src.m
    s = m + 1
    zero, one = Fraction(0), Fraction(1)
    L0, L1, M0, Mm = (_zeros(s, zero) for _ in range(4))
    try:
        if scheme == DHLV:
            w, v = src.w, src.v
            for i in range(s):
                L1[i][0] = one
                for j in range(max(i, 1), m):
                    L0[i][j] = -w(n, l + m - 1 - j)
                L0[i][m] = -v(n, l)
            L0[0][0] = -w(n, l + m - 1)
            M0[0][0] = one
            Mm[0][m - 1] += v(n, l + 1) - w(n, l)
            Mm[0][m] = -v(n, l)
        else:
            wt, vt = src.wt, src.vt
            L0[0][0] = -wt(n, l)
            L1[0][m - 1] += one
            L0[0][m] += -vt(n, l)
            for i in range(1, s):
                L1[i][i - 1] += one
                L0[i][i] += -vt(n, l + m - i)
            if n < 1:
                raise LaxConstructionError(f"dhQD M at n={n}: wt_{n - 1}^{l} = 0 in a denominator")
            a, b, c0 = wt(n - 1, l + 1), vt(n - 1, l + m), wt(n - 1, l)
            if c0 == 0:
                raise LaxConstructionError(f"dhQD M at n={n}, l={l}: wt_{n - 1}^{l} = 0 in a denominator")
            Mm[0][0] += -a * (1 - b / c0)
            M0[0][m - 1] += one
            Mm[0][m] += -a * b / c0
        for i in range(1, s):
            M0[i][i - 1] = one
    except LatticeBreakdown as exc:
        raise LaxConstructionError(f"{scheme} Lax entry undefined: {exc}") from exc
    return {"L0": L0, "L1": L1, "M0": M0, "Mm1": Mm}


def build_lax(src, scheme: str, n: int, l: int):
    """(L_n^l, M_n^l) as Laurent matrices."""
    p = lax_parts(src, scheme, n, l)
    L = LaurentMatrix.from_parts({0: p["L0"], 1: p["L1"]})
    M = LaurentMatrix.from_parts({0: p["M0"], -1: p["Mm1"]})
    return L, M


def lax_compatibility_residual(src, scheme: str, n: int, l: int) -> LaurentMatrix:
    """L_n^{l+1} M_n^l - M_{n+1}^l L_n^l."""
    L_up, _ = build_lax(src, scheme, n, l + 1)
    L, M = build_lax(src, scheme, n, l)
    _, M_next = build_lax(src, scheme, n + 1, l)
    return L_up @ M - M_next @ L


def wave_vector(lattice: TauLattice, scheme: str, n: int, l: int) -> list:
    """Psi_n^l = (X_n^{l+m}, .., X_n^l) with X = P for dhLV and X = Q for dhQD."""
    fam = "P" if scheme == DHLV else "Q"
    return [build_poly(lattice, fam, n, j) for j in range(l + lattice.m, l - 1, -1)]


def _matvec(a, x):
    return [sum((aij * xj for aij, xj in zip(row, x) if aij != 0), 0 * x[0]) for row in a]


def wave_vector_check(lattice: TauLattice, scheme: str, n: int, l: int, x0) -> ResidualReport:
    """Psi_{n+1}^l = L Psi_n^l and lam Psi_n^{l+1} = (lam M0 + Mm1) Psi_n^l at lam = x0.

    The second relation is multiplied through by lam so x0 = 0 is allowed.
    """
    rep = ResidualReport(f"{scheme}-wave", m=lattice.m, coords=("n", "l"))
    p = lax_parts(lattice, scheme, n, l)
    psi = [q(x0) for q in wave_vector(lattice, scheme, n, l)]
    psi_n1 = [q(x0) for q in wave_vector(lattice, scheme, n + 1, l)]
    psi_l1 = [q(x0) for q in wave_vector(lattice, scheme, n, l + 1)]
    a0, a1 = _matvec(p["L0"], psi), _matvec(p["L1"], psi)
    for i, (u, t, target) in enumerate(zip(a0, a1, psi_n1)):
        rep.record((n, l), u + x0 * t - target, detail=f"L row {i}")
    b0, bm = _matvec(p["M0"], psi), _matvec(p["Mm1"], psi)
    for i, (u, t, target) in enumerate(zip(b0, bm, psi_l1)):
        rep.record((n, l), x0 * u + t - x0 * target, detail=f"M row {i}")
    return rep
