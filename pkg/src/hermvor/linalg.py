"""Exact linear algebra over Z and Q on plain nested lists."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def primitive(vec):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            d = x.denominator
            den = den * d // gcd(den, d)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def bareiss_det(M) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def det_sign(M) -> int:
    d = bareiss_det(M)
    return (d > 0) - (d < 0)


def row_echelon(rows, ncols=None):
    """Fraction-free echelon form of integer rows.

    Returns ``(echelon_rows, pivot_columns, pivot_row_indices)`` where
    ``pivot_row_indices`` lists which input rows became pivots, in order.
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    basis = []   # (pivot col, row)
    used = []
    for idx, r in enumerate(rows):
        r = list(r)
        for pc, b in basis:
            if r[pc]:
                f, g = r[pc], b[pc]
                r = [x * g - y * f for x, y in zip(r, b)]
                h = 0
                for x in r:
                    h = gcd(h, x)
                if h > 1:
                    r = [x // h for x in r]
        pc = next((j for j, x in enumerate(r) if x), None)
        if pc is None:
            continue
        basis.append((pc, r))
        used.append(idx)
    return [b for _, b in basis], [pc for pc, _ in basis], used


def rank(rows) -> int:
    """Exact rank of a rational/integer matrix given by rows."""
    rows = [primitive(r) for r in rows]
    return len(row_echelon(rows)[0])


def independent_subset(rows) -> list[int]:
    """Indices of the first maximal linearly independent subset of rows."""
    rows = [primitive(r) for r in rows]
    return row_echelon(rows)[2]


def pivot_columns(rows) -> list[int]:
    """Columns on which the given independent rows restrict to a full-rank block."""
    T = [list(c) for c in zip(*[primitive(r) for r in rows])]
    return independent_subset(T)


def nullspace(rows, ncols: int) -> list[list[int]]:
    """Integer basis (primitive vectors) of ``{x : rows @ x = 0}`` over Q."""
    rows = [primitive(r) for r in rows]
    # reduced row echelon form over Q
    R = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fc]
        basis.append(primitive(v))
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a square nonsingular rational system ``A x = b``."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
