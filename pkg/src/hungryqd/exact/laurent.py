"""Laurent polynomials in the spectral parameter and matrices over them."""

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence

from hungryqd.errors import DimensionError


class LaurentPoly:
    """Immutable finite sum of coefficient * lam**e with e any integer.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] = None):
        clean = {}
        for e, c in (terms or {}).items():
            if c != 0:
                clean[int(e)] = c
        self._terms = clean

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e: int) -> "LaurentPoly":
        return cls({e: c})

    @property
    def terms(self) -> Dict[int, object]:
        return dict(self._terms)

    def coeff(self, e: int):
        return self._terms.get(e, 0)

    def exponents(self) -> list:
        return sorted(self._terms)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0:
            return not self._terms
        return all(abs(c) <= tol for c in self._terms.values())

    def __bool__(self):
        return bool(self._terms)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: Dict[int, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __call__(self, lam):
        return self.evaluate(lam)

    def evaluate(self, lam):
        """Value at lam; lam = 0 is rejected if a negative exponent is present."""
        total = 0
        for e, c in self._terms.items():
            if e < 0 and lam == 0:
                raise ZeroDivisionError("negative power evaluated at 0")
            total = total + c * (Fraction(lam) ** e if not isinstance(lam, float) else lam ** e)
        return total

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        parts = [f"{c}*lam^{e}" for e, c in sorted(self._terms.items())]
        return "LaurentPoly(" + " + ".join(parts) + ")"


ZERO = LaurentPoly()


def _as_poly(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly.const(x)


class LaurentMatrix:
    """Immutable rectangular matrix of LaurentPoly entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence]):
        rows = [tuple(_as_poly(x) for x in row) for row in data]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged Laurent matrix")
        self.rows = len(rows)
        self.cols = ncols
        self._data = tuple(rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "LaurentMatrix":
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[LaurentPoly.const(1) if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_parts(cls, parts: Mapping[int, Sequence[Sequence]]) -> "LaurentMatrix":
        """Combine scalar matrices keyed by lambda exponent into one matrix."""
        shapes = {(len(a), len(a[0]) if a else 0) for a in parts.values()}
        if len(shapes) != 1:
            raise DimensionError("parts have different shapes")
        (r, c), = shapes
        out = [[dict() for _ in range(c)] for _ in range(r)]
        for e, a in parts.items():
            for i in range(r):
                for j in range(c):
                    if a[i][j] != 0:
                        out[i][j][e] = out[i][j].get(e, 0) + a[i][j]
        return cls([[LaurentPoly(t) for t in row] for row in out])

    @property
    def shape(self) -> tuple:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def entries(self) -> Iterable:
        for row in self._data:
            yield from row

    def part(self, e: int) -> list:
        """Scalar coefficient matrix of lam**e."""
        return [[p.coeff(e) for p in row] for row in self._data]

    def exponents(self) -> list:
        return sorted({e for p in self.entries() for e in p.exponents()})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(p.is_zero(tol) for p in self.entries())

    def nonzero_entries(self, tol: float = 0.0) -> list:
        return [(i, j) for i, row in enumerate(self._data) for j, p in enumerate(row) if not p.is_zero(tol)]

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return laurent_matmul(self, other)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._same_shape(other)
        return LaurentMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._same_shape(other)
        return LaurentMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def evaluate(self, lam) -> list:
        return [[p.evaluate(lam) for p in row] for row in self._data]

    def __repr__(self):
        return f"LaurentMatrix({self.rows}x{self.cols})"


def laurent_matmul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    """Product with exact coefficient convolution in every entry."""
    if a.cols != b.rows:
        raise DimensionError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    out = []
    for i in range(a.rows):
        arow = a._data[i]
        row = []
        for j in range(b.cols):
            acc: Dict[int, object] = {}
            for t in range(a.cols):
                x, y = arow[t], b._data[t][j]
                if not x or not y:
                    continue
                for e1, c1 in x._terms.items():
                    for e2, c2 in y._terms.items():
                        acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
            row.append(LaurentPoly(acc))
        out.append(row)
    return LaurentMatrix(out)
