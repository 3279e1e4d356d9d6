"""Hermitian forms over F = Q(w), their Q-coordinates, and minimal vectors.

Conventions
-----------
* An O-vector ``v`` in O^N is a flat integer tuple ``(a1, b1, ..., aN, bN)``
  meaning ``v_i = a_i + b_i w``.  The same tuple is the integer coordinate
  vector of ``v`` in the Z-basis ``{e_1, w e_1, ..., e_N, w e_N}`` of O^N.
* A form is stored by its N^2 rational coordinates: the diagonal entries
  ``a_ii`` followed by ``(b_ij, c_ij)`` for ``i < j`` (row-major), where
  ``a_ij = b_ij + c_ij w``.
* ``q(v) = v v^*`` and ``A[v] = v^* A v = <A, q(v)>`` with ``<A, B> = Tr(AB)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .linalg import rank as _rank
from .number_field import QuadElement, QuadField, canonical, field


def offdiag_pairs(N: int):
    return [(i, j) for i in range(N) for j in range(i + 1, N)]


def coord_dim(N: int) -> int:
    return N * N


class HermitianForm:
    """An N x N Hermitian matrix with entries in F, held by its Q-coordinates."""

    __slots__ = ("K", "N", "coords", "__dict__")

    def __init__(self, K: QuadField | int, N: int, coords):
        if isinstance(K, int):
            K = field(K)
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != N * N:
            raise ValueError(f"expected {N * N} coordinates, got {len(coords)}")
        self.K = K
        self.N = N
        self.coords = coords

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_entries(cls, K, entries):
        """Build from an N x N matrix of pairs/QuadElements; checks Hermitian symmetry."""
        if isinstance(K, int):
            K = field(K)
        N = len(entries)

        def pair(x):
            if isinstance(x, QuadElement):
                return (x.a, x.b)
            if isinstance(x, (tuple, list)):
                return (Fraction(x[0]), Fraction(x[1]))
            return (Fraction(x), Fraction(0))

        E = [[pair(x) for x in row] for row in entries]
        for i in range(N):
            if E[i][i][1] != 0:
                raise ValueError("diagonal entries must be rational")
            for j in range(i + 1, N):
                if K.conj(E[j][i]) != E[i][j]:
                    raise ValueError("matrix is not Hermitian")
        coords = [E[i][i][0] for i in range(N)]
        for i, j in offdiag_pairs(N):
            coords.extend(E[i][j])
        return cls(K, N, coords)

    @classmethod
    def identity(cls, K, N: int):
        return cls(K, N, [1] * N + [0] * (N * (N - 1)))

    @classmethod
    def zero(cls, K, N: int):
        return cls(K, N, [0] * (N * N))

    # -- structure --------------------------------------------------------------
    def entry(self, i: int, j: int):
        """Entry ``a_ij`` as a pair of Fractions."""
        N = self.N
        if i == j:
            return (self.coords[i], Fraction(0))
        if i < j:
            k = N + 2 * _pair_index(N, i, j)
            return (self.coords[k], self.coords[k + 1])
        return self.K.conj(self.entry(j, i))

    def entries(self):
        return [[QuadElement(self.K, *self.entry(i, j)) for j in range(self.N)]
                for i in range(self.N)]

    def __add__(self, other):
        _check_same(self, other)
        return HermitianForm(self.K, self.N, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        _check_same(self, other)
        return HermitianForm(self.K, self.N, [a - b for a, b in zip(self.coords, other.coords)])

    def scale(self, c):
        c = Fraction(c)
        return HermitianForm(self.K, self.N, [c * a for a in self.coords])

    def __eq__(self, other):
        return (isinstance(other, HermitianForm) and self.K.D == other.K.D
                and self.N == other.N and self.coords == other.coords)

    def __hash__(self):
        return hash((self.K.D, self.N, self.coords))

    def __repr__(self):
        return f"HermitianForm(D={self.K.D}, N={self.N}, coords={[str(c) for c in self.coords]})"

    def trace(self) -> Fraction:
        return sum(self.coords[: self.N], Fraction(0))

    # -- exact invariants ------------------------------------------------------------
    def pivots(self) -> list[Fraction]:
        """Pivots of Hermitian Gaussian elimination; the k-th leading principal
        minor is the product of the first k pivots.  Stops at the first
        non-positive pivot."""
        K, N = self.K, self.N
        M = [[self.entry(i, j) for j in range(N)] for i in range(N)]
        out = []
        for k in range(N):
            d = M[k][k][0]
            out.append(d)
            if d <= 0:
                break
            for i in range(k + 1, N):
                f = K.divide(M[i][k], (d, 0))
                for j in range(k + 1, N):
                    p = K.mul(f, M[k][j])
                    M[i][j] = (M[i][j][0] - p[0], M[i][j][1] - p[1])
        return out

    def leading_minors(self) -> list[Fraction]:
        out, acc = [], Fraction(1)
        for d in self.pivots():
            acc *= d
            out.append(acc)
        return out

    def is_positive_definite(self) -> bool:
        p = self.pivots()
        return len(p) == self.N and all(d > 0 for d in p)

    def det(self) -> Fraction:
        """Exact determinant (rational since the matrix is Hermitian)."""
        K, N = self.K, self.N
        M = [[self.entry(i, j) for j in range(N)] for i in range(N)]
        det = (Fraction(1), Fraction(0))
        for k in range(N):
            piv = next((i for i in range(k, N) if M[i][k] != (0, 0)), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                M[k], M[piv] = M[piv], M[k]
                det = (-det[0], -det[1])
            det = K.mul(det, M[k][k])
            for i in range(k + 1, N):
                f = K.divide(M[i][k], M[k][k])
                for j in range(k, N):
                    p = K.mul(f, M[k][j])
                    M[i][j] = (M[i][j][0] - p[0], M[i][j][1] - p[1])
        assert det[1] == 0
        return det[0]

    # -- values ------------------------------------------------------------------------------
    def __call__(self, v) -> Fraction:
        return evaluate(self, v)

    def hermitian_product(self, v, w):
        """``v^* A w`` as a pair of Fractions."""
        K, N = self.K, self.N
        tot0, tot1 = Fraction(0), Fraction(0)
        for i in range(N):
            vi = (v[2 * i], v[2 * i + 1])
            for j in range(N):
                x = K.mul(K.mul_conj(vi, self.entry(i, j)), (w[2 * j], w[2 * j + 1]))
                tot0 += x[0]
                tot1 += x[1]
        return (tot0, tot1)

    @cached_property
    def gram(self):
        """Realified Gram matrix (rational, 2N x 2N); see :func:`realify`."""
        return realify(self)

    @cached_property
    def integral_gram(self):
        """``(L, G_int)`` with ``G_int = L * gram`` integral and ``L > 0`` minimal."""
        G = self.gram
        L = 1
        for row in G:
            for x in row:
                L = L * x.denominator // gcd(L, x.denominator)
        return L, [[int(x * L) for x in row] for row in G]

    def value_scaled(self, x) -> int:
        """``L * A[x]`` as an exact integer (``L`` from :attr:`integral_gram`)."""
        _, G = self.integral_gram
        tot = 0
        m = len(x)
        for i in range(m):
            xi = x[i]
            if xi:
                row = G[i]
                s = 0
                for j in range(m):
                    if x[j]:
                        s += row[j] * x[j]
                tot += xi * s
        return tot


def _pair_index(N, i, j):
    # index of (i, j), i < j, in row-major order of offdiag_pairs(N)
    return i * N - i * (i + 1) // 2 + (j - i - 1)


def _check_same(A, B):
    if A.N != B.N or A.K.D != B.K.D:
        raise ValueError("forms of different rank or field")


def _as_flat(v):
    if v and isinstance(v[0], (tuple, list)):
        return tuple(int(c) for x in v for c in x)
    if v and isinstance(v[0], QuadElement):
        return tuple(int(c) for x in v for c in (x.a, x.b))
    return tuple(v)


def evaluate(A: HermitianForm, v) -> Fraction:
    """``A[v] = v^* A v`` (exactly rational)."""
    v = _as_flat(v)
    if len(v) != 2 * A.N:
        raise ValueError("dimension mismatch")
    K = A.K
    tot = Fraction(0)
    for i in range(A.N):
        vi = (v[2 * i], v[2 * i + 1])
        if vi != (0, 0):
            tot += A.coords[i] * K.norm(vi)
    for i, j in offdiag_pairs(A.N):
        vi = (v[2 * i], v[2 * i + 1])
        vj = (v[2 * j], v[2 * j + 1])
        if vi == (0, 0) or vj == (0, 0):
            continue
        x = K.mul(K.mul_conj(vi, A.entry(i, j)), vj)
        tot += K.trace(x)
    return tot


def q_coords(K: QuadField, v) -> tuple[int, ...]:
    """Integer coordinates of ``q(v) = v v^*``."""
    v = _as_flat(v)
    N = len(v) // 2
    out = [K.norm((v[2 * i], v[2 * i + 1])) for i in range(N)]
    for i, j in offdiag_pairs(N):
        x = K.mul_conj((v[2 * j], v[2 * j + 1]), (v[2 * i], v[2 * i + 1]))
        out.extend(x)
    return tuple(out)


def rank_one(K: QuadField | int, v) -> HermitianForm:
    """The form ``q(v) = v v^*``."""
    if isinstance(K, int):
        K = field(K)
    v = _as_flat(v)
    if not any(v):
        raise ValueError("q is only defined on nonzero vectors")
    return HermitianForm(K, len(v) // 2, q_coords(K, v))


def pairing_matrix(K: QuadField, N: int) -> list[list[int]]:
    """Integer Gram matrix T of the trace pairing: ``<A, B> = a^T T b`` in coordinates."""
    n = N * N
    T = [[0] * n for _ in range(n)]
    for i in range(N):
        T[i][i] = 1
    for k in range(len(offdiag_pairs(N))):
        p = N + 2 * k
        T[p][p] = 2
        T[p][p + 1] = T[p + 1][p] = K.t
        T[p + 1][p + 1] = 2 * K.n
    return T


def trace_pair(A: HermitianForm, B: HermitianForm) -> Fraction:
    """``<A, B> = Tr(AB)``."""
    _check_same(A, B)
    N, K = A.N, A.K
    tot = sum((a * b for a, b in zip(A.coords[:N], B.coords[:N])), Fraction(0))
    for k in range(len(offdiag_pairs(N))):
        p = N + 2 * k
        b, c = A.coords[p], A.coords[p + 1]
        b2, c2 = B.coords[p], B.coords[p + 1]
        tot += 2 * b * b2 + K.t * (b * c2 + c * b2) + 2 * K.n * c * c2
    return tot


def functional_to_form(K: QuadField, N: int, f) -> HermitianForm:
    """The form H with ``<H, X> = f . coords(X)`` for all X."""
    f = [Fraction(x) for x in f]
    out = list(f[:N])
    det = 4 * K.n - K.t * K.t
    for k in range(len(offdiag_pairs(N))):
        p = N + 2 * k
        u, w = f[p], f[p + 1]
        # inverse of [[2, t], [t, 2n]]
        out.append((2 * K.n * u - K.t * w) / det)
        out.append((-K.t * u + 2 * w) / det)
    return HermitianForm(K, N, out)


def realify(A: HermitianForm) -> list[list[Fraction]]:
    """Symmetric rational 2N x 2N matrix G with ``G[x] = A[x]`` on O^N = Z^{2N}."""
    K, N = A.K, A.N
    m = 2 * N
    G = [[Fraction(0)] * m for _ in range(m)]
    basis = [(1, 0), (0, 1)]
    for i in range(N):
        for j in range(N):
            a = A.entry(i, j)
            for p, e in enumerate(basis):
                for r, e2 in enumerate(basis):
                    # contribution of conj(x_i) a_ij x_j, symmetrised later
                    x = K.mul(K.mul_conj(e, a), e2)
                    G[2 * i + p][2 * j + r] += Fraction(K.trace(x)) / 2
    return G


# --------------------------------------------------------------------------------
# lattice enumeration

def _fp_decomposition(G):
    m = len(G)
    q = [[float(x) for x in row] for row in G]
    for i in range(m):
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, m):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, m):
            for l in range(k, m):
                q[k][l] -= q[k][i] * q[i][l]
    return q


_REL = 1e-9


def _enumerate(A: HermitianForm, bound: Fraction, shrink: bool):
    """Fincke-Pohst over Z^{2N}; yields ``(L*A[x], x)`` with exact scaled values.

    Only one of ``x, -x`` is produced.  When ``shrink`` is set the search radius
    tracks the smallest exact value found so far (shortest-vector mode).
    """
    if not A.is_positive_definite():
        raise ValueError("form is not positive definite")
    L, _ = A.integral_gram
    q = _fp_decomposition(A.gram)
    m = len(q)
    d = [q[i][i] for i in range(m)]
    best = [bound * L]   # exact scaled radius
    radius = [float(bound) * (1 + _REL) + _REL]
    x = [0] * m
    found = []

    def rec(i, T, upper_zero):
        if i < 0:
            if upper_zero:
                return
            val = A.value_scaled(x)
            if val <= best[0]:
                found.append((val, tuple(x)))
                if shrink and val < best[0]:
                    best[0] = val
                    radius[0] = float(Fraction(val, L)) * (1 + _REL) + _REL
            return
        c = 0.0
        row = q[i]
        for j in range(i + 1, m):
            if x[j]:
                c -= row[j] * x[j]
        rem = radius[0] - T
        if rem < 0:
            return
        s = math.sqrt(rem / d[i]) + _REL
        lo = math.ceil(c - s)
        hi = math.floor(c + s)
        if upper_zero and lo < 0:
            lo = 0
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = xi - c
            rec(i - 1, T + d[i] * t * t, upper_zero and xi == 0)
        x[i] = 0

    rec(m - 1, 0.0, True)
    return L, best[0], found


def shortest_vectors_upto(A: HermitianForm, bound) -> list[tuple[tuple, Fraction]]:
    """All O-vectors (canonical up to units) with ``A[v] <= bound`` and their values."""
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    L, _, found = _enumerate(A, bound, shrink=False)
    out = {}
    for val, x in found:
        c = canonical(A.K, x)
        out[c] = Fraction(val, L)
    return sorted(out.items(), key=lambda kv: (kv[1], [-a for a in kv[0]]))


def shortest_vectors(A: HermitianForm, start_bound=None):
    """``(m(A), canonical minimal vectors)``."""
    if start_bound is None:
        # value at a basis vector is an exact upper bound for the minimum
        start_bound = min(A.coords[: A.N])
    L, best, found = _enumerate(A, Fraction(start_bound), shrink=True)
    vecs = sorted({canonical(A.K, x) for val, x in found if val == best}, reverse=True)
    return Fraction(best, L), vecs


@dataclass(frozen=True)
class MinVectorSet:
    """Minimal vectors of a form, canonical up to units."""

    vectors: tuple
    minimum: Fraction
    num_units: int

    @property
    def total_count(self) -> int:
        return len(self.vectors) * self.num_units

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def minimal_vectors(A: HermitianForm) -> MinVectorSet:
    m, vecs = shortest_vectors(A)
    return MinVectorSet(tuple(vecs), m, A.K.num_units)


def span_rank_of_vectors(K: QuadField, vectors) -> int:
    """Rank over Q of ``{coords(q(v))}``."""
    return _rank([q_coords(K, v) for v in vectors])


def f_rank(K: QuadField, vectors) -> int:
    """Dimension of the F-span of a set of O-vectors.

    Computed as half the Q-rank of the integer vectors ``v`` and ``omega*v``,
    which avoids rational arithmetic entirely.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return 0
    rows = []
    for v in vectors:
        rows.append(v)
        w = []
        for a, b in zip(v[0::2], v[1::2]):
            w += [-K.n * b, a + K.t * b]
        rows.append(w)
    return _rank(rows) // 2


def is_well_rounded(K: QuadField, vectors, N: int) -> bool:
    return f_rank(K, vectors) == N
