"""Determinant families Delta, Theta, Pi, Sigma over an elliptic Gram matrix, and their polynomials.

Row recipes (row r means the Gram row <e_r, .>):
    Delta_k^l, P: rows l, l+m, .., l+(k-1)m
    Theta_k^l, Q: rows l, l+2m, l+3m, .., l+km   (l+m is skipped)
    Pi_k^l,    T: rows as Delta
    Sigma_k^l, S: rows as Theta
Delta/Theta use columns e_0, e_2, .., e_k; Pi/Sigma use e_2, .., e_{k+1}.
A polynomial of order k borders the order k-1 row set with a bottom row of
basis monomials and divides by the order k-1 determinant, which is exactly
the cofactor of its top monomial, so every polynomial is monic.
"""

from typing import Dict

from hungryqd.errors import BudgetExceeded, LatticeBreakdown, OutOfDomain
from hungryqd.exact.linalg import det, solve
from hungryqd.measures import GramMatrix, eval_basis

DET_FAMILIES = ("Delta", "Theta", "Pi", "Sigma")
POLY_FAMILIES = ("P", "Q", "T", "S")
_POLY_DET = {"P": "Delta", "Q": "Theta", "T": "Pi", "S": "Sigma"}


def basis_columns(k: int) -> list:
    """e_0, e_2, .., e_k: the k admissible indices below k + 1."""
    return [0] + list(range(2, k + 1)) if k >= 1 else []


def shifted_columns(k: int) -> list:
    """e_2, .., e_{k+1}."""
    return list(range(2, k + 2))


def x_shift(j: int) -> int:
    """Basis index of x * e_j."""
    return 2 if j == 0 else j + 2


class EllipticPoly:
    """Immutable coefficient map over admissible basis indices {0, 2, 3, ..}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[int, object] = None):
        self.terms = {j: c for j, c in (terms or {}).items() if c != 0}

    def coeff(self, j: int):
        return self.terms.get(j, 0)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0:
            return not self.terms
        return all(abs(c) <= tol for c in self.terms.values())

    @property
    def top(self) -> int:
        return max(self.terms) if self.terms else -1

    def __add__(self, other: "EllipticPoly") -> "EllipticPoly":
        out = dict(self.terms)
        for j, c in other.terms.items():
            out[j] = out.get(j, 0) + c
        return EllipticPoly(out)

    def __sub__(self, other: "EllipticPoly") -> "EllipticPoly":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "EllipticPoly":
        return EllipticPoly({j: c * v for j, v in self.terms.items()})

    __rmul__ = scale

    def xmul(self) -> "EllipticPoly":
        return EllipticPoly({x_shift(j): c for j, c in self.terms.items()})

    def __call__(self, point):
        return sum((c * eval_basis(j, point) for j, c in self.terms.items()), 0 * point[0])

    def __eq__(self, other):
        return isinstance(other, EllipticPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"EllipticPoly({dict(sorted(self.terms.items()))})"


def combine(*pairs) -> EllipticPoly:
    """Linear combination sum c_i * p_i of (c_i, p_i) pairs."""
    out: Dict[int, object] = {}
    for c, p in pairs:
        for j, v in p.terms.items():
            out[j] = out.get(j, 0) + c * v
    return EllipticPoly(out)


class EllipticLattice:
    """Memoized Delta/Theta/Pi/Sigma determinants and P/Q/T/S polynomials for hunger m."""

    def __init__(self, gram: GramMatrix, m: int):
        if m < 1:
            raise ValueError("hunger parameter m must be >= 1")
        self.gram = gram
        self.m = m
        self._dets = {}
        self._polys = {}

    # -- recipes
    def row_indices(self, family: str, k: int, l: int) -> list:
        m = self.m
        if family in ("Delta", "Pi", "P", "T"):
            return [l + i * m for i in range(k)]
        if family in ("Theta", "Sigma", "Q", "S"):
            return ([l] + [l + i * m for i in range(2, k + 1)]) if k >= 1 else []
        raise ValueError(f"unknown family {family!r}")

    def col_indices(self, family: str, k: int) -> list:
        if family in ("Delta", "Theta", "P", "Q"):
            return basis_columns(k)
        if family in ("Pi", "Sigma", "T", "S"):
            return shifted_columns(k)
        raise ValueError(f"unknown family {family!r}")

    def _block(self, rows, cols) -> list:
        g = self.gram
        try:
            return [[g.entry(r, c) for c in cols] for r in rows]
        except BudgetExceeded:
            raise
        except KeyError as exc:
            raise BudgetExceeded(str(exc)) from exc

    def matrix(self, family: str, k: int, l: int) -> list:
        return self._block(self.row_indices(family, k, l), self.col_indices(family, k))

    # -- determinants
    def det(self, family: str, k: int, l: int):
        if family not in DET_FAMILIES:
            raise ValueError(f"determinant family must be one of {DET_FAMILIES}")
        if k < 0:
            raise OutOfDomain(f"{family}_{k}^{l}: negative order")
        if l < 2:
            raise OutOfDomain(f"{family}_{k}^{l}: superscript below 2")
        key = (family, k, l)
        v = self._dets.get(key)
        if v is None:
            v = det(self.matrix(family, k, l)) if k else self.gram.entry(0, 0) * 0 + 1
            self._dets[key] = v
        return v

    def Delta(self, k, l):
        return self.det("Delta", k, l)

    def Theta(self, k, l):
        return self.det("Theta", k, l)

    def Pi(self, k, l):
        return self.det("Pi", k, l)

    def Sigma(self, k, l):
        return self.det("Sigma", k, l)

    # -- polynomials
    def poly(self, family: str, k: int, l: int) -> EllipticPoly:
        """Order-k polynomial of a family; order 0 of P and Q is the constant 1."""
        if family not in POLY_FAMILIES:
            raise ValueError(f"polynomial family must be one of {POLY_FAMILIES}")
        if k < 0:
            raise OutOfDomain(f"{family}_{k}^{l}: negative order")
        if l < 2:
            raise OutOfDomain(f"{family}_{k}^{l}: superscript below 2")
        key = (family, k, l)
        p = self._polys.get(key)
        if p is not None:
            return p
        one = self.gram.entry(0, 0) * 0 + 1
        if k == 0:
            if family in ("T", "S"):
                raise OutOfDomain(f"{family}_0 is not defined")
            p = EllipticPoly({0: one})
        else:
            if self.det(_POLY_DET[family], k - 1, l) == 0:
                raise LatticeBreakdown(f"{family}_{k}", (k, l), "zero normalizing determinant")
            rows = self.row_indices(family, k - 1, l)
            cols = self.col_indices(family, k)
            a = self._block(rows, cols)
            if rows:
                sol = solve([r[:-1] for r in a], [-r[-1] for r in a])
            else:
                sol = []
            p = EllipticPoly(dict(zip(cols, list(sol) + [one])))
        self._polys[key] = p
        return p

    def poly_cofactor(self, family: str, k: int, l: int) -> EllipticPoly:
        """The same polynomial from the bordered determinant; independent oracle for tests."""
        if k == 0:
            return self.poly(family, k, l)
        rows = self.row_indices(family, k - 1, l)
        cols = self.col_indices(family, k)
        a = self._block(rows, cols)
        norm = self.det(_POLY_DET[family], k - 1, l)
        if norm == 0:
            raise LatticeBreakdown(f"{family}_{k}", (k, l), "zero normalizing determinant")
        n = len(cols)
        out = {}
        for j, c in enumerate(cols):
            minor = [r[:j] + r[j + 1:] for r in a]
            sign = -1 if (n - 1 + j) % 2 else 1
            out[c] = sign * det(minor) / norm
        return EllipticPoly(out)

    def P(self, k, l):
        return self.poly("P", k, l)

    def Q(self, k, l):
        return self.poly("Q", k, l)

    def T(self, k, l):
        return self.poly("T", k, l)

    def S(self, k, l):
        return self.poly("S", k, l)

    def orthogonality_residuals(self, k: int, l: int) -> list:
        """<e_{l+im}, P_k^l> for i = 0..k-2, all zero by construction."""
        p = self.P(k, l)
        return [self.gram.inner({l + i * self.m: 1}, p.terms) for i in range(k - 1)]


def gram_index_budget(k_max: int, l_max: int, m: int, extra_l: int = 0) -> int:
    """Largest Gram index touched by families of order <= k_max at superscripts <= l_max + extra_l."""
    return max(l_max + extra_l + k_max * m, k_max + 1)
