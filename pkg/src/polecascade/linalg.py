"""Exact linear algebra over the rationals for small dense systems.

Vectors are tuples of Fractions (or ints), matrices are tuples of row
tuples.  Everything here is dimension <= 8, so plain Gaussian elimination
is fine.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Sequence

Vec = tuple[Q, ...]
Mat = tuple[Vec, ...]


def vec(xs) -> Vec:
    return tuple(Q(x) for x in xs)


def vadd(x: Sequence, y: Sequence) -> Vec:
    return tuple(Q(a) + Q(b) for a, b in zip(x, y, strict=True))


def vsub(x: Sequence, y: Sequence) -> Vec:
    return tuple(Q(a) - Q(b) for a, b in zip(x, y, strict=True))


def vscale(c, x: Sequence) -> Vec:
    c = Q(c)
    return tuple(c * Q(a) for a in x)


def vdot(x: Sequence, y: Sequence) -> Q:
    return sum((Q(a) * Q(b) for a, b in zip(x, y, strict=True)), Q(0))


def matvec(m: Sequence[Sequence], x: Sequence) -> Vec:
    return tuple(vdot(row, x) for row in m)


def rref(rows: list[list[Q]]) -> tuple[list[list[Q]], list[int]]:
    """Reduced row echelon form (in place); returns (matrix, pivot columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = Q(1) / rows[r][c]
        rows[r] = [inv * v for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence]) -> int:
    rows = [[Q(v) for v in row] for row in m]
    _, pivots = rref(rows)
    return len(pivots)


def solve_affine(a: Sequence[Sequence], b: Sequence) -> tuple[Vec, list[Vec]] | None:
    """Solve a x = b exactly; returns (particular solution, nullspace basis) or None.

    The nullspace basis spans {x : a x = 0}.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Q(v) for v in row] + [Q(b[i])] for i, row in enumerate(a)]
    rows, pivots = rref(rows)
    pivots = [c for c in pivots if c < n]
    for row in rows:
        if all(v == 0 for v in row[:n]) and row[n] != 0:
            return None
    part = [Q(0)] * n
    for r, c in enumerate(pivots):
        part[c] = rows[r][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * n
        v[fc] = Q(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][fc]
        basis.append(tuple(v))
    return tuple(part), basis


def nullspace(a: Sequence[Sequence]) -> list[Vec]:
    n = len(a[0]) if a else 0
    sol = solve_affine(a, [Q(0)] * len(a)) if a else (tuple(), [])
    if not a:
        return [tuple(Q(1) if j == i else Q(0) for j in range(n)) for i in range(n)]
    assert sol is not None
    return sol[1]


def inverse(m: Sequence[Sequence]) -> Mat:
    n = len(m)
    rows = [[Q(v) for v in row] + [Q(1) if j == i else Q(0) for j in range(n)]
            for i, row in enumerate(m)]
    rows, pivots = rref(rows)
    if len([c for c in pivots if c < n]) != n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def solve_linear_system(a: Sequence[Sequence], b: Sequence) -> Vec:
    """Unique solution of a square/overdetermined consistent system."""
    sol = solve_affine(a, b)
    if sol is None:
        raise ValueError("inconsistent linear system")
    part, basis = sol
    if basis:
        raise ValueError("solution not unique")
    return part
