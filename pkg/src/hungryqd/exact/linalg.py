"""Dense exact linear algebra on row-major sequences of scalars.

Matrices are plain nested sequences (lists or tuples of rows).  Determinants of
rational matrices go through fraction-free Bareiss elimination on an
integer-scaled copy, so every intermediate value is an exact integer.
"""

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Sequence

from hungryqd.errors import DimensionError

Matrix = Sequence[Sequence]


def shape(a: Matrix) -> tuple:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    for row in a:
        if len(row) != cols:
            raise DimensionError("ragged matrix")
    return rows, cols


def _require_square(a: Matrix) -> int:
    r, c = shape(a)
    if r != c:
        raise DimensionError(f"expected a square matrix, got {r}x{c}")
    return r


def _bareiss(a: list) -> int:
    """Determinant of a square integer matrix; ``a`` is destroyed."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot_row = a[k]
        akk = pivot_row[k]
        for i in range(k + 1, n):
            row = a[i]
            aik = row[k]
            if aik == 0:
                for j in range(k + 1, n):
                    row[j] = row[j] * akk // prev
            else:
                for j in range(k + 1, n):
                    row[j] = (row[j] * akk - aik * pivot_row[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _det_float(a: list) -> float:
    n = len(a)
    d = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(a[r][k]))
        if a[p][k] == 0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            d = -d
        akk = a[k][k]
        d *= akk
        for i in range(k + 1, n):
            f = a[i][k] / akk
            if f:
                row, prow = a[i], a[k]
                for j in range(k + 1, n):
                    row[j] -= f * prow[j]
    return d


def det(a: Matrix):
    """Exact determinant (float matrices use partial pivoting instead).

    The empty matrix has determinant 1.
    """
    n = _require_square(a)
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, Rational) for row in a for x in row):
        scale = 1
        rows = []
        for row in a:
            m = lcm(*(Fraction(x).denominator for x in row))
            scale *= m
            rows.append([int(Fraction(x) * m) for x in row])
        return Fraction(_bareiss(rows), scale)
    return _det_float([[float(x) for x in row] for row in a])


def det_cofactor(a: Matrix):
    """Laplace expansion along the first row.  Factorial cost; test oracle only."""
    n = _require_square(a)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        if a[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1:] for row in (list(r) for r in a[1:])]
        term = a[0][j] * det_cofactor(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def minor(a: Matrix, drop_rows=(), drop_cols=()) -> list:
    """Submatrix with the given row and column indices removed, order preserved."""
    dr, dc = set(drop_rows), set(drop_cols)
    return [[x for j, x in enumerate(row) if j not in dc] for i, row in enumerate(a) if i not in dr]


def submatrix(a: Matrix, rows, cols) -> list:
    return [[a[i][j] for j in cols] for i in rows]


def solve(a: Matrix, b: Sequence) -> list:
    """Solve ``a x = b`` by Gaussian elimination.

    Exact for rational input; any float entry switches to partial pivoting in
    floats.  Raises ZeroDivisionError when ``a`` is singular.
    """
    n = _require_square(a)
    if len(b) != n:
        raise DimensionError("right-hand side length does not match")
    exact = all(isinstance(x, Rational) for row in a for x in row) and all(isinstance(y, Rational) for y in b)
    conv = Fraction if exact else float
    m = [[conv(x) for x in row] + [conv(y)] for row, y in zip(a, b)]
    for k in range(n):
        if exact:
            p = next((r for r in range(k, n) if m[r][k] != 0), None)
        else:
            p = max(range(k, n), key=lambda r: abs(m[r][k]))
            if m[p][k] == 0:
                p = None
        if p is None:
            raise ZeroDivisionError("singular system")
        m[k], m[p] = m[p], m[k]
        pk = m[k]
        inv = 1 / pk[k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                row = m[i]
                for j in range(k, n + 1):
                    row[j] -= f * pk[j]
    x = [conv(0)] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


def _check_indices(idx, n):
    idx = list(idx)
    if len(idx) not in (2, 3):
        raise ValueError("Sylvester checks take 2 or 3 row/column indices")
    if any(i < 0 or i >= n for i in idx):
        raise IndexError(f"indices {idx} out of range for size {n}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices {idx} must be strictly increasing")
    return idx


def sylvester_check(a: Matrix, rows, cols):
    """LHS - RHS of the two- or three-row/column Sylvester identity.

    With two indices this is Desnanot-Jacobi:
        D * D(i1 i2; j1 j2) = D(i1; j1) D(i2; j2) - D(i1; j2) D(i2; j1).
    With three indices (i1 < i2 < i3, j1 < j2 < j3):
        D * D(i1 i2 i3; j1 j2 j3) = D(i1 i2; j1 j2) D(i3; j3)
                                    - D(i1 i3; j1 j2) D(i2; j3)
                                    + D(i2 i3; j1 j2) D(i1; j3),
    where D(R; C) deletes rows R and columns C.  The result is exactly zero
    for every square matrix in exact mode.
    """
    n = _require_square(a)
    rows = _check_indices(rows, n)
    cols = _check_indices(cols, n)
    if len(rows) != len(cols):
        raise ValueError("row and column index lists differ in length")

    def d(r=(), c=()):
        return det(minor(a, r, c))

    if len(rows) == 2:
        (i1, i2), (j1, j2) = rows, cols
        lhs = d() * d(rows, cols)
        rhs = d([i1], [j1]) * d([i2], [j2]) - d([i1], [j2]) * d([i2], [j1])
        return lhs - rhs
    (i1, i2, i3), (j1, j2, j3) = rows, cols
    lhs = d() * d(rows, cols)
    rhs = (
        d([i1, i2], [j1, j2]) * d([i3], [j3])
        - d([i1, i3], [j1, j2]) * d([i2], [j3])
        + d([i2, i3], [j1, j2]) * d([i1], [j3])
    )
    return lhs - rhs
