"""Exact linear algebra over the rationals.

Dense row reduction with a deterministic pivot rule (leftmost nonzero
column, first available row), solving with the free-variables-to-zero
convention, kernels, and span bookkeeping.  Everything is a plain list of
lists of Fraction; matrices here are desk-scale.
"""
from __future__ import annotations

from fractions import Fraction

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def mat_vec(rows: Matrix, v: Vector) -> Vector:
    return [sum((r[j] * v[j] for j in range(len(v))), Fraction(0)) for r in rows]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Pivots are chosen deterministically: scan columns left to right and take
    the first row (from the top of the unreduced block) with a nonzero entry.
    Returns the reduced matrix and the list of pivot columns.
    """
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nrow, ncol = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        if r == nrow:
            break
        pr = next((i for i in range(r, nrow) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrow):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def solve(rows: Matrix, rhs: Vector) -> Vector | None:
    """Solve rows * x = rhs; free variables are set to zero.

    Returns None when the system is inconsistent (not an exception: callers
    use inconsistency as a mathematical answer).
    """
    if not rows:
        return [] if all(b == 0 for b in rhs) else ([] if not rhs else None)
    ncol = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncol in pivots:
        return None
    x = [Fraction(0)] * ncol
    for i, c in enumerate(pivots):
        x[c] = red[i][ncol]
    return x


def nullspace(rows: Matrix) -> list[Vector]:
    """Echelon basis of the kernel, one vector per free column."""
    if not rows:
        return []
    ncol = len(rows[0])
    red, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for j in range(ncol):
        if j in pivset:
            continue
        v = [Fraction(0)] * ncol
        v[j] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][j]
        basis.append(v)
    return basis


def row_space(rows: Matrix) -> Matrix:
    """Echelon basis of the row span (nonzero rows of the rref)."""
    red, pivots = rref(rows)
    return [red[i] for i in range(len(pivots))]


def in_span(echelon: Matrix, v: Vector) -> bool:
    """Membership of v in the span of an echelon basis."""
    if not echelon:
        return all(x == 0 for x in v)
    w = list(v)
    for row in echelon:
        p = next((j for j, x in enumerate(row) if x != 0), None)
        if p is not None and w[p] != 0:
            f = w[p] / row[p]
            w = [x - f * y for x, y in zip(w, row)]
    return all(x == 0 for x in w)


def extend_echelon(echelon: Matrix, candidates: Matrix) -> tuple[Matrix, list[int]]:
    """Grow an echelon basis by the candidate vectors that enlarge the span.

    Returns the new echelon basis and the indices of the candidates kept.
    """
    kept: list[int] = []
    basis = [list(r) for r in echelon]
    for idx, v in enumerate(candidates):
        if not in_span(basis, v):
            kept.append(idx)
            basis = row_space(basis + [list(v)])
    return basis, kept
