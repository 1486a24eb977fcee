"""Block Lax pairs for the coupled Delta/Theta system (4x4 blocks) and hQQD (3x3 blocks).

Blocks are (m+2)x(m+2).  L = L0 + lam L1 and M = M0 + lam^-1 M1, and the
wave vector stacks one polynomial family per block with superscripts running
downward.  Each builder is a table: block id -> entries, so every m >= 2 shares
one code path.  At m = 1 the lam-part of the last block row would need column
m - 2 < 0, so no pair is constructed there.
"""

from fractions import Fraction

from hungryqd.elliptic.families import EllipticLattice, combine
from hungryqd.elliptic.relations import Guarded
from hungryqd.errors import LatticeBreakdown, LaxConstructionError, OutOfDomain
from hungryqd.exact.laurent import LaurentMatrix
from hungryqd.report import ResidualReport

COUPLED = "coupled"
HQQD = "hqqd"
SCHEMES = (COUPLED, HQQD)

ZERO, ONE = Fraction(0), Fraction(1)


class _Blocks:
    """Sparse block matrix under construction: {(bi, bj): {(i, j): value}}."""

    def __init__(self, nb: int, s: int):
        self.nb, self.s = nb, s
        self.blocks = {}

    def add(self, bij, i, j, value):
        blk = self.blocks.setdefault(bij, {})
        blk[i, j] = blk.get((i, j), ZERO) + value

    def diag(self, bij, values):
        for i, v in enumerate(values):
            self.add(bij, i, i, v)

    def eye(self, bij):
        self.diag(bij, [ONE] * self.s)

    def shift(self, bij, top=None):
        """Ones on the subdiagonal, plus optional entries in row 0."""
        for i in range(1, self.s):
            self.add(bij, i, i - 1, ONE)
        for j, v in (top or {}).items():
            self.add(bij, 0, j, v)

    def dense(self) -> list:
        s, n = self.s, self.nb * self.s
        out = [[ZERO] * n for _ in range(n)]
        for (bi, bj), blk in self.blocks.items():
            for (i, j), v in blk.items():
                out[bi * s + i][bj * s + j] += v
        return out


def _q(g, what, num, den):
    return g.ratio(what, (0, 0), num, den)


def coupled_parts(g: Guarded, n: int, l: int) -> dict:
    m = g.m
    s = m + 2
    D, Th = g.D, g.Th
    L0, L1, M0, M1 = (_Blocks(4, s) for _ in range(4))
    hi = range(l + 2 * m + 2, l + m, -1)
    lo = range(l + m + 2, l, -1)

    L0.diag((0, 0), [-_q(g, "A11", D(n + 1, j) * Th(n - 1, j), D(n, j) * Th(n, j)) for j in hi])
    L0.eye((0, 1))
    L0.diag((1, 1), [-_q(g, "A22", D(n + 2, j) * D(n, j + m), D(n + 1, j) * D(n + 1, j + m)) for j in lo])
    L0.eye((1, 3))
    L0.diag((2, 2), [-_q(g, "A33", D(n + 2, j) * Th(n, j), D(n + 1, j) * Th(n + 1, j)) for j in lo])
    L0.eye((2, 3))
    L0.diag((3, 2), [-_q(g, "A43", D(n + 1, j + 2) * Th(n, j), D(n + 1, j) * Th(n, j + 2)) for j in lo])
    L0.diag((3, 3), [_q(g, "A44", D(n + 1, j + 2) * Th(n + 1, j) - D(n + 1, j) * Th(n + 1, j + 2),
                        D(n + 2, j) * Th(n, j + 2)) for j in lo])

    for r, j in ((0, l + m + 4), (1, l + m + 3)):
        L1.add((3, 0), r, m - 2 + r, -_q(g, "B41", D(n + 1, j) * Th(n - 1, j), D(n, j) * Th(n, j)))
        L1.add((3, 1), r, m - 2 + r, ONE)
    for i in range(2, s):
        L1.add((3, 2), i, i - 2, ONE)

    a = l + m + 3
    b = l + 2 * m + 3
    c = l + 3
    ratio22 = _q(g, "C22", D(n, a) * Th(n + 1, c), D(n + 1, c) * D(n, b))
    M0.shift((0, 0))
    M0.add((0, 1), 0, m - 1, _q(g, "C12", D(n, a) * D(n, b), D(n + 1, a) * D(n - 1, b)) * (1 - ratio22))
    M0.add((0, 2), 0, m - 1, _q(g, "C13", D(n, a) * Th(n, c), D(n + 1, c) * D(n - 1, b)))
    M0.shift((1, 1), {m - 1: ratio22})
    M0.add((1, 2), 0, m - 1, -_q(g, "C23", D(n + 1, a) * Th(n, c), D(n + 1, c) * D(n, b)))
    M0.add((2, 0), 0, m - 1, -_q(g, "C31", D(n + 1, a) * Th(n - 1, a), D(n, a) * Th(n, a)))
    M0.add((2, 1), 0, m - 1, ONE)
    M0.shift((2, 2))
    M0.add((3, 1), 0, m - 1, -_q(g, "C42", D(n + 2, c) * D(n, a), D(n + 1, c) * D(n + 1, a)))
    M0.shift((3, 3), {m - 1: ONE})

    t = _q(g, "D12", D(n, b) * D(n, l + m + 1), D(n - 1, b) * D(n + 1, l + m + 1))
    M1.add((0, 0), 0, 1, _q(g, "D11", D(n, b) * Th(n - 1, l + 2 * m + 1), D(n, l + 2 * m + 1) * Th(n - 1, b)))
    M1.add((0, 1), 0, 1, -_q(g, "D12", D(n, b) * Th(n - 2, b), D(n - 1, b) * Th(n - 1, b)) + t)
    M1.add((0, 1), 0, s - 1, -t)
    return {"L0": L0.dense(), "L1": L1.dense(), "M0": M0.dense(), "M1": M1.dense()}


def hqqd_parts(g: Guarded, n: int, l: int) -> dict:
    m = g.m
    s = m + 2
    u, v, w = g.U, g.V, g.W
    L0, L1, M0, M1 = (_Blocks(3, s) for _ in range(4))
    hi = range(l + 2 * m + 2, l + m, -1)
    lo = range(l + m + 2, l, -1)

    L0.diag((0, 0), [-u(n, j) for j in hi])
    L0.eye((0, 1))
    L0.diag((1, 1), [-u(n + 1, j) for j in lo])
    L0.eye((1, 2))
    L0.diag((2, 1), [-w(n + 1, j) * u(n + 1, j) for j in lo])
    L0.diag((2, 2), [w(n + 1, j) - v(n + 1, j) for j in lo])

    L1.add((2, 0), 0, m - 2, -u(n, l + m + 4))
    L1.add((2, 0), 1, m - 1, -u(n, l + m + 3))
    L1.add((2, 1), 0, m - 2, ONE)
    L1.add((2, 1), 1, m - 1, ONE)
    for i in range(2, s):
        L1.add((2, 1), i, i - 2, ONE)

    for bb in range(3):
        M0.shift((bb, bb), {m - 1: ONE})
    M0.add((1, 0), 0, m - 1, -u(n, l + m + 3))
    M0.add((2, 1), 0, m - 1, -u(n + 1, l + 3))

    p = u(n - 1, l + 2 * m + 3)
    M1.add((0, 0), 0, 1, p * w(n - 1, l + 2 * m + 1))
    M1.add((0, 0), 0, s - 1, -p * v(n - 1, l + 2 * m + 1))
    M1.add((0, 1), 0, 1, -p)
    return {"L0": L0.dense(), "L1": L1.dense(), "M0": M0.dense(), "M1": M1.dense()}


def lax_parts_elliptic(lat: EllipticLattice, scheme: str, n: int, l: int) -> dict:
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if lat.m < 2:
        raise LaxConstructionError("block Lax pairs need m >= 2: the lam-part uses column m-2 of the first block")
    g = Guarded(lat)
    try:
        return (coupled_parts if scheme == COUPLED else hqqd_parts)(g, n, l)
    except LatticeBreakdown as exc:
        raise LaxConstructionError(f"{scheme} block entry {exc.what} has a zero denominator at n={n}, l={l}") from exc


def build_lax_elliptic(lat: EllipticLattice, scheme: str, n: int, l: int):
    """(L_n^l, M_n^l) as Laurent matrices of size 4(m+2) (coupled) or 3(m+2) (hqqd)."""
    p = lax_parts_elliptic(lat, scheme, n, l)
    L = LaurentMatrix.from_parts({0: p["L0"], 1: p["L1"]})
    M = LaurentMatrix.from_parts({0: p["M0"], -1: p["M1"]})
    return L, M


def lax_compatibility_residual_elliptic(lat: EllipticLattice, scheme: str, n: int, l: int) -> LaurentMatrix:
    """L_n^{l+1} M_n^l - M_{n+1}^l L_n^l."""
    L_up, _ = build_lax_elliptic(lat, scheme, n, l + 1)
    L, M = build_lax_elliptic(lat, scheme, n, l)
    _, M_next = build_lax_elliptic(lat, scheme, n + 1, l)
    return L_up @ M - M_next @ L


def wave_vector_elliptic(lat: EllipticLattice, scheme: str, n: int, l: int) -> list:
    """Psi_n^l as a list of EllipticPoly, superscripts descending inside each block."""
    g = Guarded(lat)
    m = lat.m
    hi = range(l + 2 * m + 2, l + m, -1)
    lo = range(l + m + 2, l, -1)
    if scheme == COUPLED:
        return ([g.Q(n, j) for j in hi] + [g.P(n + 1, j) for j in hi]
                + [g.Q(n + 1, j) for j in lo] + [g.P(n + 2, j) for j in lo])
    return ([g.P(n, j) for j in range(l + 3 * m + 2, l + 2 * m, -1)] + [g.P(n + 1, j) for j in hi]
            + [g.P(n + 2, j) for j in lo])


def _apply(a, psi):
    """Matrix of scalars times a vector of EllipticPoly."""
    return [combine(*[(c, p) for c, p in zip(row, psi) if c != 0]) for row in a]


def wave_relations_symbolic(lat: EllipticLattice, scheme: str, n: int, l: int) -> tuple:
    """Coefficient-space residuals of Psi_{n+1} = L Psi_n and x Psi_n^{l+1} = (x M0 + M1) Psi_n.

    lam acts as multiplication by x (the basis index shift).
    """
    p = lax_parts_elliptic(lat, scheme, n, l)
    psi = wave_vector_elliptic(lat, scheme, n, l)
    nxt = wave_vector_elliptic(lat, scheme, n + 1, l)
    up = wave_vector_elliptic(lat, scheme, n, l + 1)
    a0, a1 = _apply(p["L0"], psi), _apply(p["L1"], psi)
    rl = [combine((1, u), (1, t.xmul()), (-1, tgt)) for u, t, tgt in zip(a0, a1, nxt)]
    b0, b1 = _apply(p["M0"], psi), _apply(p["M1"], psi)
    rm = [combine((1, u.xmul()), (1, t), (-1, tgt.xmul())) for u, t, tgt in zip(b0, b1, up)]
    return rl, rm


def wave_vector_check_elliptic(lat: EllipticLattice, scheme: str, n: int, l: int, point) -> ResidualReport:
    """Pointwise Psi relations with lam := x0 at (x0, y0); the M relation is multiplied by lam."""
    x0 = point[0]
    p = lax_parts_elliptic(lat, scheme, n, l)
    psi = [q(point) for q in wave_vector_elliptic(lat, scheme, n, l)]
    nxt = [q(point) for q in wave_vector_elliptic(lat, scheme, n + 1, l)]
    up = [q(point) for q in wave_vector_elliptic(lat, scheme, n, l + 1)]
    rep = ResidualReport(f"{scheme}-wave", m=lat.m, coords=("n", "l"))

    def mv(a):
        return [sum((c * x for c, x in zip(row, psi) if c != 0), ZERO) for row in a]

    for i, (u, t, tgt) in enumerate(zip(mv(p["L0"]), mv(p["L1"]), nxt)):
        rep.record((n, l), u + x0 * t - tgt, detail=f"L row {i}")
    for i, (u, t, tgt) in enumerate(zip(mv(p["M0"]), mv(p["M1"]), up)):
        rep.record((n, l), x0 * u + t - x0 * tgt, detail=f"M row {i}")
    return rep


def residual_annihilates_psi(lat: EllipticLattice, scheme: str, n: int, l: int) -> list:
    """x * R(x) Psi_n^l in coefficient space, R the compatibility residual; zero rows expected."""
    r = lax_compatibility_residual_elliptic(lat, scheme, n, l)
    psi = wave_vector_elliptic(lat, scheme, n, l)
    out = []
    for e in r.exponents() or [0]:
        part = _apply(r.part(e), psi)
        for _ in range(e + 1):
            part = [q.xmul() for q in part]
        out.append(part)
    return [combine(*[(1, rows[i]) for rows in out]) for i in range(len(psi))]


def elliptic_lax_suite(lat: EllipticLattice, scheme: str, n_range, l_range) -> ResidualReport:
    """Zero-matrix compatibility over the given sites; unconstructible sites are counted as skipped."""
    rep = ResidualReport(f"{scheme}-lax", m=lat.m, coords=("n", "l"))
    for n in n_range:
        for l in l_range:
            try:
                r = lax_compatibility_residual_elliptic(lat, scheme, n, l)
            except (OutOfDomain, LaxConstructionError) as exc:
                rep.skip((n, l))
                if str(exc) not in rep.notes and len(rep.notes) < 4:
                    rep.notes.append(str(exc))
                continue
            rep.record((n, l), r, detail=f"nonzero entries {len(r.nonzero_entries())}")
    return rep
