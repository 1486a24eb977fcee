"""Acceptance criteria, one test each, at the stated windows and tolerances.

Each test appends one PASS/FAIL line to RESULTS; conftest prints them in the
terminal summary so they appear in plain ``pytest -v`` output.
"""

import time
from fractions import Fraction as F

import pytest

from hungryqd.eigen import convergence_report, qd_eigen
from hungryqd.elliptic import hadt
from hungryqd.elliptic import lax as elax
from hungryqd.elliptic.families import EllipticLattice
from hungryqd.elliptic.relations import RELATION_IDS, relation_suite
from hungryqd.errors import LaxConstructionError, OutOfDomain
from hungryqd.exact.laurent import LaurentPoly
from hungryqd.measures import DiscreteMeasure, GramMatrix, SplitMix64, moments_from_measure, random_measure, random_point_measure
from hungryqd.qd.lax import build_lax, lax_compatibility_residual, wave_vector_check
from hungryqd.qd.polys import biorthogonality_report, recurrence_coeffs
from hungryqd.qd.schemes import DHLV, DHQD, SCHEMES, evolution_headroom, verify_evolution, verify_scheme
from hungryqd.qd.tau import TauLattice

RESULTS = []
SEEDS = range(100)
HUNGERS = (1, 2, 3)


def report(number, ok, detail, t0):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}  ({time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line)


def tau_lattice(seed, size, m, count):
    return TauLattice(moments_from_measure(random_measure(seed, size), count, m))


def random_rational(rng):
    return F(rng.randint(-30, 30), rng.randint(1, 9))


def test_criterion_01_biorthogonality():
    t0 = time.perf_counter()
    slowest, ok, checked = 0.0, True, 0
    for m in HUNGERS:
        t = time.perf_counter()
        for seed in range(5):
            lat = tau_lattice(seed, 7, m, 80)
            for l in range(3):
                rep = biorthogonality_report(lat, 5, l)
                ok &= rep.passed and rep.checked == 36
                checked += rep.checked
        slowest = max(slowest, time.perf_counter() - t)
    ok &= slowest < 5
    report(1, ok, f"{checked} pairings exact, slowest suite {slowest:.2f}s (< 5s)", t0)
    assert ok


def test_criterion_02_recurrences():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for m in HUNGERS:
        lat = tau_lattice(m + 100, 9, m, 120)
        for fam in ("P", "Q"):
            for n in range(max(0, m - 1), 7):
                for l in range(2):
                    exp = recurrence_coeffs(lat, fam, n, l)
                    ok &= exp.vanishing_violations() == [] and exp.reconstruction.is_zero()
                    checked += 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    report(2, ok, f"{checked} expansions, coefficients i <= n-m-1 vanish, < 5s", t0)
    assert ok


def test_criterion_03_scheme_identities():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for m in HUNGERS:
        n, l = 4, 3 * m + 6
        for seed in SEEDS:
            lat = tau_lattice(seed, n + 3, m, l + (m + 1) * (n + 3) + 4)
            for s in SCHEMES:
                rep = verify_scheme(lat, s, n, l)
                ok &= rep.passed and not rep.breakdowns and rep.checked == 2 * (n + 1) * (l + 1)
                checked += rep.checked
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report(3, ok, f"{checked} residuals exactly 0 over 100 seeds, total < 60s", t0)
    assert ok


def test_criterion_04_evolution_vs_oracle():
    t0 = time.perf_counter()
    ok, cells = True, 0
    for m in HUNGERS:
        n, l = 4, 3 * m + 6
        rows = evolution_headroom(n, l)
        for seed in SEEDS:
            lat = tau_lattice(seed, rows + 3, m, l + 2 * m + (m + 1) * (rows + 5) + 4)
            for s in SCHEMES:
                rep = verify_evolution(lat, s, n, l)
                ok &= rep.passed and rep.skipped == 0 and not rep.breakdowns
                cells += rep.checked
    report(4, ok, f"{cells} evolved cells equal determinant ratios", t0)
    assert ok


def test_criterion_05_lax_compatibility():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for m in HUNGERS:
        lat = tau_lattice(m + 7, 8, m, 100)
        for n in range(4):
            for l in range(9):
                ok &= lax_compatibility_residual(lat, DHLV, n, l).is_zero()
                checked += 1
                if n == 0:
                    # wt_{-1} = 0 sits in a denominator of the dhQD M matrix
                    with pytest.raises(LaxConstructionError):
                        build_lax(lat, DHQD, n, l)
                    continue
                ok &= lax_compatibility_residual(lat, DHQD, n, l).is_zero()
                checked += 1
    # m = 1: entry-for-entry against the 2x2 reduction
    lat = tau_lattice(3, 6, 1, 40)
    lam, inv = LaurentPoly.monomial(1, 1), LaurentPoly.monomial(1, -1)
    for n in range(3):
        for l in range(4):
            L, M = build_lax(lat, DHLV, n, l)
            v, w, v1 = lat.v(n, l), lat.w(n, l), lat.v(n, l + 1)
            ok &= [L[0, 0], L[0, 1], L[1, 0], L[1, 1]] == [lam - w, -LaurentPoly.const(v), lam, -LaurentPoly.const(v)]
            ok &= [M[0, 0], M[0, 1], M[1, 0], M[1, 1]] == [1 + inv * (v1 - w), inv * (-v), LaurentPoly.const(1),
                                                           LaurentPoly()]
    report(5, ok, f"{checked} zero Laurent residuals (dhQD from n = 1), m=1 2x2 match", t0)
    assert ok


def test_criterion_06_toda():
    t0 = time.perf_counter()
    t = tau_lattice(42, 8, 1, 40).tau
    bad = [(k, l) for k in range(1, 5) for l in range(1, 7)
           if t(k + 1, l - 1) * t(k - 1, l + 1) - t(k, l - 1) * t(k, l + 1) + t(k, l) ** 2 != 0]
    report(6, not bad, "bilinear Toda residual exactly 0, k <= 4, l <= 6", t0)
    assert not bad


_ELLIPTIC = {}


def elliptic_lattice(seed, m):
    key = (seed, m)
    if key not in _ELLIPTIC:
        _ELLIPTIC[key] = EllipticLattice(GramMatrix(random_point_measure(seed, 16), 10 + 10 * m + 14), m)
    return _ELLIPTIC[key]


def test_criterion_07_elliptic_relations():
    t0 = time.perf_counter()
    ok, checked, skipped = True, 0, 0
    broken = set()
    for m in HUNGERS:
        for seed in SEEDS:
            for rep in relation_suite(elliptic_lattice(seed, m), RELATION_IDS, 6, 2, 10).values():
                ok &= rep.passed and rep.checked > 0
                checked += rep.checked
                skipped += rep.skipped
                if rep.breakdowns:
                    broken.add(seed)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    note = f"; zero-determinant breakdown sites reported for seeds {sorted(broken)}" if broken else ""
    report(7, ok, f"{len(RELATION_IDS)} relations, {checked} sites exact 0 ({skipped} outside domain){note}, < 5 min", t0)
    assert ok


def test_criterion_08_hhadt():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for m in HUNGERS:
        for seed in SEEDS:
            rep = hadt.hhadt_suite(elliptic_lattice(seed, m), 6, 2, 10)
            ok &= rep.passed and rep.checked > 0
            checked += rep.checked
    ok &= hadt.hhadt_reduces_to_hadt_symbolically()
    lat = elliptic_lattice(0, 1)
    for k in range(3, 7):
        for l in range(2, 11):
            try:
                ok &= all(x == 0 for x in hadt.hadt_termwise_residuals(lat, k, l))
            except OutOfDomain:
                pass
    report(8, ok, f"{checked} hHADT sites exact 0; m=1 term-by-term equal to HADT", t0)
    assert ok


def test_criterion_09_hqqd():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for m in HUNGERS:
        for seed in SEEDS:
            rep = hadt.hqqd_suite(elliptic_lattice(seed, m), 6, 2, 10)
            ok &= rep.passed and rep.checked > 0
            checked += rep.checked
    ok &= hadt.hqqd_reduces_to_qqd()
    report(9, ok, f"{checked} sites, all three residuals exact 0; m=1 equation form is QQD", t0)
    assert ok


def test_criterion_10_elliptic_lax_compatibility():
    """Expected to fail; see the decisions ledger and README (known failures)."""
    t0 = time.perf_counter()
    zero, nonzero, unbuildable = 0, 0, 0
    for m in (1, 2):
        lat = elliptic_lattice(1, m)
        for scheme in elax.SCHEMES:
            for n in range(3):
                for l in range(2, 7):
                    try:
                        r = elax.lax_compatibility_residual_elliptic(lat, scheme, n, l)
                    except (LaxConstructionError, OutOfDomain):
                        unbuildable += 1
                        continue
                    if r.is_zero():
                        zero += 1
                    else:
                        nonzero += 1
    total = zero + nonzero + unbuildable
    # constructible sites (m = 2, n >= 3) for the record
    lat = elliptic_lattice(1, 2)
    outside = [elax.lax_compatibility_residual_elliptic(lat, s, n, 2).is_zero() for s in elax.SCHEMES for n in (3, 4)]
    ok = zero == total
    report(10, ok, f"{zero}/{total} sites with zero residual ({unbuildable} not constructible, {nonzero} nonzero); "
                   f"n=3,4 at m=2: zero for {sum(outside)}/{len(outside)}", t0)
    assert ok, "elliptic block Lax pairs: residual matrix not zero; see decisions ledger"


def test_criterion_11_wave_vectors():
    t0 = time.perf_counter()
    rng = SplitMix64(2024)
    ok, checks = True, 0
    for m in HUNGERS:
        lat = tau_lattice(m + 70, 8, m, 100)
        for s in SCHEMES:
            for n in range(1 if s == DHQD else 0, 4):
                for l in range(9):
                    for _ in range(5):
                        ok &= wave_vector_check(lat, s, n, l, random_rational(rng)).passed
                        checks += 1
    for m in (2, 3):
        lat = elliptic_lattice(2, m)
        for s in elax.SCHEMES:
            for n in (3, 4):
                for l in range(2, 7):
                    for _ in range(5):
                        pt = (random_rational(rng), random_rational(rng))
                        ok &= elax.wave_vector_check_elliptic(lat, s, n, l, pt).passed
                        checks += 1
    report(11, ok, f"{checks} site-point checks over the four Lax pairs (block pairs at m=2,3, n=3,4)", t0)
    assert ok


def test_criterion_12_eigen_demo():
    t0 = time.perf_counter()
    mu = DiscreteMeasure((F(4), F(2), F(1)), (F(1), F(1), F(1)))
    runs = [(m, "vt") for m in HUNGERS] + [(2, "v")]
    ok, worst_err, worst_rate = True, 0.0, 0.0
    for m, var in runs:
        rep = convergence_report(qd_eigen(mu, m, 60, var), 1e-6, mu.nodes)
        ok &= rep["passed"]
        for t in rep["traces"]:
            worst_err = max(worst_err, t["final_rel_error"])
            dev = abs(t["rate"] - t["node_gap_ratio"]) / t["node_gap_ratio"]
            worst_rate = max(worst_rate, dev)
        if var == "v":
            ok &= [t["target"] for t in rep["traces"]] == [16.0, 4.0, 1.0]
    elapsed = time.perf_counter() - t0
    ok &= worst_rate <= 0.2 and elapsed < 10
    report(12, ok, f"max rel error {worst_err:.1e} at l=60, max rate deviation {worst_rate:.1%}, < 10s", t0)
    assert ok
