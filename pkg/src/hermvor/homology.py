"""Smith normal form over Z and the homology of the Voronoi complex.

The differentials are sparse with many unit entries.  Elimination first
removes ``+-1`` pivots (cheapest first, by a Markowitz count) directly on the
sparse rows; what is left is a small dense core that goes through a textbook
Smith reduction on Python integers.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

from .isometry import torsion_prime_bound


@dataclass
class SNFResult:
    rank: int
    divisors: Counter          # elementary divisor (>= 1) -> multiplicity

    @property
    def nontrivial(self) -> Counter:
        return Counter({d: k for d, k in self.divisors.items() if d > 1})


def _as_rows(M):
    """Sparse rows ``{col: value}`` from a DifferentialMatrix, dict or dense list."""
    if hasattr(M, "entries"):
        rows = [dict() for _ in range(M.rows)]
        for (i, j), x in M.entries.items():
            if x:
                rows[i][j] = x
        return rows, M.cols
    if isinstance(M, dict):
        nrows = 1 + max((i for i, _ in M), default=-1)
        ncols = 1 + max((j for _, j in M), default=-1)
        rows = [dict() for _ in range(nrows)]
        for (i, j), x in M.items():
            if x:
                rows[i][j] = x
        return rows, ncols
    M = [list(r) for r in M]
    ncols = len(M[0]) if M else 0
    return [{j: x for j, x in enumerate(r) if x} for r in M], ncols


def _eliminate_units(rows):
    """Remove unit pivots in place; returns how many were removed."""
    cols: dict[int, set] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(i for i, r in enumerate(rows) if r)
    count = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            for j, x in r.items():
                if x == 1 or x == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            return count
        _, p, c = best
        prow = rows[p]
        pv = prow[c]
        for i in list(cols[c]):
            if i == p:
                continue
            r = rows[i]
            f = r[c] * pv          # pv = +-1, so this is r[c] / pv
            for j, x in prow.items():
                y = r.get(j, 0) - f * x
                if y:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = y
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            if not r:
                alive.discard(i)
        for j in prow:
            cols[j].discard(p)
        rows[p] = {}
        alive.discard(p)
        cols.pop(c, None)
        count += 1


def dense_smith(M) -> list[int]:
    """Nonzero diagonal of the Smith normal form of a dense integer matrix."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        rt = A[t]
                        A[i] = [a - q * b for a, b in zip(A[i], rt)]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for r in A:
                            r[j] -= q * r[t]
                    if A[t][j]:
                        done = False
            if done:
                break
            # move the smallest nonzero entry of row/column t onto the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for r in A:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(A[t][t]))
        t += 1
    return _normalize_diagonal(diag)


def _normalize_diagonal(diag):
    """Turn a diagonal into the divisibility chain with the same cokernel."""
    d = list(diag)
    k = len(d)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = d[i], d[j]
            if b % a:
                g = gcd(a, b)
                d[i], d[j] = g, a // g * b
    return sorted(d)


def smith_normal_form(M) -> SNFResult:
    """Rank and elementary divisors (with multiplicities) of an integer matrix."""
    rows, ncols = _as_rows(M)
    ones = _eliminate_units(rows)
    core_rows = [r for r in rows if r]
    used = sorted({j for r in core_rows for j in r})
    where = {j: k for k, j in enumerate(used)}
    core = []
    for r in core_rows:
        row = [0] * len(used)
        for j, x in r.items():
            row[where[j]] = x
        core.append(row)
    diag = dense_smith(core) if core else []
    divs = Counter(diag)
    if ones:
        divs[1] += ones
    return SNFResult(ones + len(diag), divs)


@dataclass
class DegreeHomology:
    n: int
    rank: int
    torsion: Counter                 # d -> multiplicity, d > 1
    cohomology_degree: int

    def label(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        for d, k in sorted(self.torsion.items()):
            parts.append(f"(Z_{d})" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def sylow(self, p: int) -> Counter:
        """Elementary divisors of the p-part of the torsion."""
        out = Counter()
        for d, k in self.torsion.items():
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            if q > 1:
                out[q] += k
        return out


@dataclass
class HomologyResult:
    N: int
    D: int
    degrees: dict = field(default_factory=dict)     # n -> DegreeHomology
    snf: dict = field(default_factory=dict)         # n -> SNFResult of d_n
    caveat_primes: set = field(default_factory=set)

    def rank(self, n: int) -> int:
        return self.degrees[n].rank if n in self.degrees else 0

    def torsion(self, n: int) -> Counter:
        return self.degrees[n].torsion if n in self.degrees else Counter()

    def ranks(self) -> dict:
        return {n: h.rank for n, h in sorted(self.degrees.items())}

    def sylow_table(self) -> dict:
        """``{p: [(n, divisors)]}`` for every prime occurring in the torsion."""
        primes = set()
        for h in self.degrees.values():
            for d in h.torsion:
                primes |= set(_prime_factors(d))
        out = {}
        for p in sorted(primes):
            out[p] = [(n, h.sylow(p)) for n, h in sorted(self.degrees.items()) if h.sylow(p)]
        return out


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def homology(cx, check: bool = True) -> HomologyResult:
    """Integral homology of the Voronoi complex, degree by degree."""
    if check:
        from .verification import chain_identity

        if not chain_identity(cx):
            raise ArithmeticError("d o d != 0; refusing to compute homology")
    res = HomologyResult(cx.N, cx.D, caveat_primes=torsion_prime_bound(cx.N, cx.D))
    for n, d in cx.differentials.items():
        res.snf[n] = smith_normal_form(d)
    top = cx.top
    for n in range(top + 1):
        size = cx.rank_of_chain_group(n)
        rn = res.snf[n].rank if n in res.snf else 0
        rn1 = res.snf[n + 1] if n + 1 in res.snf else SNFResult(0, Counter())
        free = size - rn - rn1.rank
        res.degrees[n] = DegreeHomology(n, free, rn1.nontrivial, top - n)
    return res
