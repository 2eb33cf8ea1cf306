"""Exact linear algebra over the rationals.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  The sizes
handled here are desk-scale (a few hundred rows at most), so a dense
Gauss-Jordan elimination is all that is needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    out = [[Fraction(x) for x in row] for row in rows]
    if ncols is not None:
        for row in out:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
    return out


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[Fraction(0)] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def shape(m: Matrix, ncols: int = 0) -> tuple:
    return (len(m), len(m[0]) if m else ncols)


def matmul(a: Matrix, b: Matrix, inner: int | None = None, ncols: int | None = None) -> Matrix:
    """Product ``a @ b``.

    Empty operands carry no column information, so callers pass ``inner``
    (columns of ``a``) and ``ncols`` (columns of ``b``) when a factor may be
    empty.
    """
    n = len(a)
    k = len(b) if inner is None else inner
    p = (len(b[0]) if b else 0) if ncols is None else ncols
    out = zeros(n, p)
    for i in range(n):
        row = a[i]
        orow = out[i]
        for t in range(k):
            x = row[t]
            if x:
                brow = b[t]
                for j in range(p):
                    y = brow[j]
                    if y:
                        orow[j] += x * y
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    p = (len(a[0]) if a else 0) if ncols is None else ncols
    return [[a[i][j] for i in range(len(a))] for j in range(p)]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [row[:] for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = m[i]
                m[i] = [x - f * y for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    # eliminate on the shorter side
    if len(a[0]) < len(a):
        a = transpose(a)
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{x : a x = 0}``."""
    p = (len(a[0]) if a else 0) if ncols is None else ncols
    if not a:
        return identity(p)
    red, pivots = rref(a)
    free = [c for c in range(p) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * p
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Unique solution of the square system ``a x = b``."""
    inv = inverse(a)
    return [sum((inv[i][j] * b[j] for j in range(len(b))), Fraction(0)) for i in range(len(a))]


def row_space_basis(rows: Matrix) -> Matrix:
    if not rows:
        return []
    red, pivots = rref(rows)
    return red[: len(pivots)]


def span_dim(rows: Matrix) -> int:
    return rank(rows) if rows else 0
