"""hHADT bilinear equation, X/Y/Gamma telescoping, the hQQD scheme and their m = 1 reductions.

Equation forms are kept as data so the m = 1 reductions can be compared index
by index, not only numerically.  A Delta factor is (dk, l0, mc), meaning
Delta_{k+dk}^{l+l0+mc*m}; a scheme factor adds the variable name in front.
"""

from collections import Counter
from typing import List, Tuple

from hungryqd.elliptic.families import EllipticLattice
from hungryqd.elliptic.relations import Guarded, _check_site
from hungryqd.report import ResidualReport

# hHADT as LHS - RHS: six signed products of four Delta factors
HHADT_TERMS: List[Tuple[int, tuple]] = [
    (+1, ((1, 0, 0), (-1, 2, 1), (0, 2, 2), (0, 0, 1))),
    (-1, ((1, 0, 0), (-1, 2, 1), (0, 2, 1), (0, 0, 2))),
    (+1, ((1, 0, 0), (-2, 2, 2), (0, 2, 1), (1, 0, 1))),
    (-1, ((-1, 2, 2), (0, 0, 1), (-1, 2, 1), (2, 0, 0))),
    (+1, ((-1, 2, 2), (0, 0, 1), (0, 2, 0), (1, 0, 1))),
    (-1, ((-1, 2, 2), (0, 2, 1), (1, 0, 1), (0, 0, 0))),
]

# HADT as LHS - RHS over sigma factors (dk, dl) meaning sigma_{k+dk}^{l+dl}
HADT_TERMS: List[Tuple[int, tuple]] = [
    (+1, ((1, -2), (-1, 1), (0, 2), (0, -1))),
    (-1, ((1, -2), (-1, 1), (0, 0), (0, 1))),
    (+1, ((1, -2), (-2, 2), (0, 1), (1, -1))),
    (-1, ((-1, 2), (0, -1), (-1, 1), (2, -2))),
    (+1, ((-1, 2), (0, -1), (0, 0), (1, -1))),
    (-1, ((-1, 2), (0, 1), (1, -1), (0, -2))),
]

# sigma_k^L corresponds to Delta_k^{L+2} in the m = 1 reduction
SIGMA_SHIFT = 2


def hhadt_terms(g: Guarded, k: int, l: int) -> list:
    m = g.m
    out = []
    for sign, factors in HHADT_TERMS:
        val = sign
        for dk, l0, mc in factors:
            val = val * g.D(k + dk, l + l0 + mc * m)
        out.append(val)
    return out


def hhadt_residual(lat: EllipticLattice, k: int, l: int):
    return sum(hhadt_terms(Guarded(lat), k, l))


def hadt_terms(sigma, k: int, l: int) -> list:
    out = []
    for sign, factors in HADT_TERMS:
        val = sign
        for dk, dl in factors:
            val = val * sigma(k + dk, l + dl)
        out.append(val)
    return out


def hadt_residual(sigma, k: int, l: int):
    return sum(hadt_terms(sigma, k, l))


def hhadt_reduces_to_hadt_symbolically() -> bool:
    """At m = 1 every hHADT term equals the matching HADT term under sigma^L = Delta^{L+2}."""
    for (s1, f1), (s2, f2) in zip(HHADT_TERMS, HADT_TERMS):
        if s1 != s2:
            return False
        a = Counter((dk, l0 + mc) for dk, l0, mc in f1)
        b = Counter((dk, dl + SIGMA_SHIFT) for dk, dl in f2)
        if a != b:
            return False
    return True


def hadt_termwise_residuals(lat: EllipticLattice, k: int, l: int) -> list:
    """Numeric term-by-term difference hHADT(k, l) - HADT(k, l) at m = 1 with sigma := Delta shifted."""
    if lat.m != 1:
        raise ValueError("the HADT reduction is the m = 1 case")
    g = Guarded(lat)

    def sigma(kk, ll):
        return g.D(kk, ll + SIGMA_SHIFT)

    return [a - b for a, b in zip(hhadt_terms(g, k, l), hadt_terms(sigma, k, l))]


def telescoping_residuals(lat: EllipticLattice, k: int, l: int) -> tuple:
    """X_k = Gamma_k - Gamma_{k-1}, Y_k = Gamma_{k-2}^{l+2} - Gamma_{k-1}, Y_{k+2} + X_{k+1} = X_k^{l+2} + Y_{k+1}."""
    g = Guarded(lat)
    r1 = g.X(k, l) - (g.Gamma(k, l) - g.Gamma(k - 1, l))
    r2 = g.Y(k, l) - (g.Gamma(k - 2, l + 2) - g.Gamma(k - 1, l))
    r3 = g.Y(k + 2, l) + g.X(k + 1, l) - g.X(k, l + 2) - g.Y(k + 1, l)
    return r1, r2, r3


# hQQD equations as (lhs, rhs), each a list of products; a factor is (var, dk, l0, mc)
HQQD_FORM = [
    ([(("u", 0, 3, 0), ("w", 0, 1, 0))], [(("u", 1, 1, 0), ("w", 1, 1, 0))]),
    ([(("u", 0, 2, 1), ("v", 0, 0, 1))], [(("u", 1, 0, 0), ("v", 1, 0, 0))]),
    ([(("u", 0, 2, 1),), (("v", 1, 0, 1),), (("w", 1, 0, 0),)],
     [(("u", 2, 0, 0),), (("v", 1, 0, 0),), (("w", 1, 0, 1),)]),
]

# QQD equations, factor (var, dk, dl)
QQD_FORM = [
    ([(("u", 0, 3), ("w", 0, 1))], [(("u", 1, 1), ("w", 1, 1))]),
    ([(("u", 0, 3), ("v", 0, 1))], [(("u", 1, 0), ("v", 1, 0))]),
    ([(("u", 0, 3),), (("v", 1, 1),), (("w", 1, 0),)], [(("u", 2, 0),), (("v", 1, 0),), (("w", 1, 1),)]),
]


def hqqd_at(m: int) -> list:
    """The hQQD equations with m substituted: factors become (var, dk, dl)."""
    def sub(side):
        return sorted(tuple(sorted((v, dk, l0 + mc * m) for v, dk, l0, mc in prod)) for prod in side)
    return [(sub(lhs), sub(rhs)) for lhs, rhs in HQQD_FORM]


def hqqd_reduces_to_qqd() -> bool:
    def norm(side):
        return sorted(tuple(sorted(prod)) for prod in side)
    return hqqd_at(1) == [(norm(a), norm(b)) for a, b in QQD_FORM]


def _eval_side(g: Guarded, side, k, l):
    fns = {"u": g.U, "v": g.V, "w": g.W}
    m = g.m
    total = 0
    for prod in side:
        val = 1
        for var, dk, l0, mc in prod:
            val = val * fns[var](k + dk, l + l0 + mc * m)
        total = total + val
    return total


def hqqd_residual(lat: EllipticLattice, k: int, l: int) -> tuple:
    """LHS - RHS of the three hQQD equations with u, v, w = U, V, W."""
    g = Guarded(lat)
    return tuple(_eval_side(g, lhs, k, l) - _eval_side(g, rhs, k, l) for lhs, rhs in HQQD_FORM)


def hqqd_hhadt_link(lat: EllipticLattice, k: int, l: int):
    """Third hQQD residual times its Delta denominators, minus hHADT at (k+1, l); zero identically."""
    g = Guarded(lat)
    m, D = g.m, g.D
    q3 = hqqd_residual(lat, k, l)[2]
    scale = D(k, l + m + 2) * D(k, l + 2 * m + 2) * D(k + 2, l) * D(k + 2, l + m)
    return q3 * scale - hhadt_residual(lat, k + 1, l)


def hhadt_suite(lat: EllipticLattice, k_max: int, l_min: int, l_max: int) -> ResidualReport:
    rep = ResidualReport("hHADT", m=lat.m)
    for k in range(k_max + 1):
        for l in range(l_min, l_max + 1):
            _check_site(rep, lambda: hhadt_residual(lat, k, l), (k, l))
    return rep


def telescoping_suite(lat: EllipticLattice, k_max: int, l_min: int, l_max: int) -> ResidualReport:
    rep = ResidualReport("XY-telescoping", m=lat.m)
    for k in range(k_max + 1):
        for l in range(l_min, l_max + 1):
            _check_site(rep, lambda: list(telescoping_residuals(lat, k, l)), (k, l))
    return rep


def hqqd_suite(lat: EllipticLattice, k_max: int, l_min: int, l_max: int) -> ResidualReport:
    rep = ResidualReport("hQQD", m=lat.m)
    for k in range(k_max + 1):
        for l in range(l_min, l_max + 1):
            _check_site(rep, lambda: list(hqqd_residual(lat, k, l)), (k, l))
    return rep
