"""Property-based checks of the algebraic invariants."""

from fractions import Fraction as F

from hypothesis import assume, given
from hypothesis import strategies as st

from hungryqd.elliptic.families import EllipticLattice, x_shift
from hungryqd.exact.laurent import LaurentMatrix, LaurentPoly
from hungryqd.exact.linalg import det, det_cofactor, sylvester_check
from hungryqd.exact.scalar import format_scalar, parse_scalar
from hungryqd.measures import (DiscreteMeasure, GramMatrix, admissible_indices, eval_basis, moments_from_measure,
                               random_measure, random_point_measure)
from hungryqd.qd.lax import PerturbedVars, lax_compatibility_residual
from hungryqd.qd.polys import build_poly, build_poly_cofactor
from hungryqd.qd.schemes import DHLV, DHQD, scheme_residuals, verify_evolution, evolution_headroom
from hungryqd.qd.tau import TauLattice

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=9)
small_ints = st.integers(min_value=-6, max_value=6)
seeds = st.integers(min_value=0, max_value=2**32)
hungers = st.integers(min_value=1, max_value=3)


def square(n, elem=rationals):
    return st.lists(st.lists(elem, min_size=n, max_size=n), min_size=n, max_size=n)


def sized_square(lo, hi, elem=rationals):
    return st.integers(lo, hi).flatmap(lambda n: square(n, elem))


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


@given(sized_square(1, 5))
def test_det_matches_cofactor(a):
    assert det(a) == det_cofactor(a)


@given(sized_square(2, 6), st.data())
def test_det_equal_rows_vanish(a, data):
    i = data.draw(st.integers(0, len(a) - 1))
    j = data.draw(st.integers(0, len(a) - 1).filter(lambda x: x != i))
    a[j] = list(a[i])
    assert det(a) == 0


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(square(n, small_ints), square(n, small_ints))))
def test_det_multiplicative(pair):
    a, b = pair
    assert det(matmul(a, b)) == det(a) * det(b)


@given(st.integers(3, 7).flatmap(lambda n: st.tuples(square(n), st.integers(2, 3), st.data())))
def test_sylvester_random(args):
    a, size, data = args
    n = len(a)
    assume(size <= n)
    rows = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=size, max_size=size)))
    cols = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=size, max_size=size)))
    assert sylvester_check(a, rows, cols) == 0


def laurent_entries():
    return st.dictionaries(st.integers(-2, 2), st.fractions(-5, 5, max_denominator=4), max_size=3).map(LaurentPoly)


def laurent_matrix(n):
    return st.lists(st.lists(laurent_entries(), min_size=n, max_size=n), min_size=n, max_size=n).map(LaurentMatrix)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(laurent_matrix(n), laurent_matrix(n), laurent_matrix(n))))
def test_laurent_associative(mats):
    a, b, c = mats
    assert (a @ b) @ c == a @ (b @ c)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(laurent_matrix(n), laurent_matrix(n))), rationals)
def test_laurent_evaluation_is_homomorphic(mats, lam):
    assume(lam != 0)
    a, b = mats
    assert (a @ b).evaluate(lam) == matmul(a.evaluate(lam), b.evaluate(lam))


@given(rationals)
def test_scalar_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(seeds, st.integers(4, 16))
def test_gram_symmetry_and_shift(seed, size):
    g = GramMatrix(random_point_measure(seed, size), 14)
    idx = admissible_indices(12)
    for i in idx:
        for j in idx:
            assert g.entry(i, j) == g.entry(j, i)
            assert g.entry(x_shift(i), j) == g.entry(i, x_shift(j))


@given(st.sampled_from(admissible_indices(12)), rationals, rationals)
def test_basis_shift_multiplies_by_x(j, x, y):
    assert eval_basis(x_shift(j), (x, y)) == x * eval_basis(j, (x, y))


@given(seeds, st.integers(1, 6), st.lists(st.fractions(1, 9, max_denominator=4), min_size=6, max_size=6))
def test_moments_linear_in_weights(seed, size, extra):
    mu = random_measure(seed, size)
    other = tuple(extra[:size])
    both = DiscreteMeasure(mu.nodes, tuple(a + b for a, b in zip(mu.weights, other)))
    c1 = moments_from_measure(mu, 8).values
    c2 = moments_from_measure(DiscreteMeasure(mu.nodes, other), 8).values
    c3 = moments_from_measure(both, 8).values
    assert all(a + b == c for a, b, c in zip(c1, c2, c3))


@given(seeds, st.integers(1, 5), hungers, st.integers(0, 4))
def test_tau_vanishes_beyond_measure_size(seed, r, m, l):
    lat = TauLattice(moments_from_measure(random_measure(seed, r), 60, m))
    assert lat.tau(r + 1, l) == 0
    assert lat.tau(r, l) != 0


@given(seeds, hungers)
def test_cache_and_recompute_agree(seed, m):
    mu = random_measure(seed, 5)
    warm = TauLattice(moments_from_measure(mu, 40, m))
    for n in range(4):
        for l in range(4):
            warm.vt(n, l)
    cold = TauLattice(moments_from_measure(mu, 40, m))
    assert all(warm.tau(n, l) == cold.tau(n, l) for n in range(5) for l in range(5))


@given(seeds, hungers, st.sampled_from(["P", "Q"]), st.integers(0, 4), st.integers(0, 4))
def test_poly_solve_matches_cofactor(seed, m, fam, n, l):
    lat = TauLattice(moments_from_measure(random_measure(seed, 6), 60, m))
    assert build_poly(lat, fam, n, l) == build_poly_cofactor(lat, fam, n, l)


@given(seeds, st.sampled_from(["P", "Q", "T", "S"]), st.integers(1, 5), st.integers(2, 5))
def test_elliptic_poly_solve_matches_cofactor(seed, fam, k, l):
    lat = EllipticLattice(GramMatrix(random_point_measure(seed, 14), 30), 2)
    assert lat.poly(fam, k, l) == lat.poly_cofactor(fam, k, l)


@given(seeds, hungers, st.integers(0, 3), st.integers(0, 5))
def test_scheme_identities(seed, m, n, l):
    lat = TauLattice(moments_from_measure(random_measure(seed, 7), 80, m))
    for s in (DHLV, DHQD):
        assert scheme_residuals(lat, s, n, l) == (0, 0)


@given(seeds, hungers)
def test_evolution_reproduces_ratios(seed, m):
    n, l = 2, m + 2
    lat = TauLattice(moments_from_measure(random_measure(seed, evolution_headroom(n, l) + 3), 120, m))
    for s in (DHLV, DHQD):
        assert verify_evolution(lat, s, n, l).passed


@given(seeds, st.integers(2, 3), st.fractions(min_value=F(1, 100), max_value=1, max_denominator=100))
def test_lax_residual_detects_perturbation(seed, m, delta):
    lat = TauLattice(moments_from_measure(random_measure(seed, 6), 60, m))
    assert lax_compatibility_residual(lat, DHLV, 1, 1).is_zero()
    src = PerturbedVars(lat, {("w", 1, 1): delta})
    assert not lax_compatibility_residual(src, DHLV, 1, 1).is_zero()
