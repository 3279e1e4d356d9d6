"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed together at the end
of the session by ``conftest.pytest_terminal_summary``.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from fractions import Fraction
from math import gcd


from hermvor.hermitian import HermitianForm, evaluate, minimal_vectors, rank_one, trace_pair
from hermvor.homology import homology, smith_normal_form
from hermvor.isometry import factorize, form_equivalent, torsion_prime_bound
from hermvor.linalg import bareiss_det
from hermvor.number_field import field
from hermvor.verification import chain_identity, mass_formula, xi_cycle_check
from hermvor.voronoi import make_record
from test_hermitian import brute_force_minimum, random_form
from test_isometry import random_group_element

RESULTS: dict[int, tuple[bool, str]] = {}

CENSUS = {-3: 2, -4: 1, -7: 2, -8: 2, -11: 12}
# signed per-dimension sums for GL_4 over the Gaussian integers, dimensions 3..15
GL4_SUMS = [Fraction(-11, 3072), Fraction(127, 960), Fraction(-4187, 2304), Fraction(28375, 2304),
            Fraction(-868465, 18432), Fraction(126127, 1152), Fraction(-81945, 512),
            Fraction(340955, 2304), Fraction(-48655, 576), Fraction(16075, 576),
            Fraction(-21337, 4608), Fraction(101, 384), Fraction(-17, 92160)]
COMPUTED = [(2, -3), (2, -4), (2, -7), (2, -8), (3, -3), (3, -4), (3, -7), (3, -8), (3, -11)]


def record(k: int, ok: bool, detail: str):
    RESULTS[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_01_census(perfect_of):
    got, times = {}, {}
    for D in CENSUS:
        t = time.perf_counter()
        got[D] = len(perfect_of(3, D))
        times[D] = time.perf_counter() - t
    ok = got == CENSUS and max(times.values()) < 600
    slowest = max(times, key=times.get)
    record(1, ok, f"N=3 counts {got}; slowest D={slowest} took {times[slowest]:.1f}s")


def test_criterion_02_homology_gl3_gaussian(complex_of):
    h = homology(complex_of(3, -4))
    ranks = h.ranks()
    ok = (ranks == {n: int(n in (4, 5, 8)) for n in range(9)}
          and h.degrees[8].label() == "Z"
          and h.sylow_table() == {2: [(5, Counter({2: 1}))]})
    record(2, ok, f"D=-4 ranks {ranks}; Sylow {dict(h.sylow_table())}")


def test_criterion_03_homology_eisenstein(complex_of):
    h = homology(complex_of(3, -3))
    ok = ((h.rank(4), h.rank(5), h.rank(8)) == (1, 1, 1)
          and h.degrees[7].sylow(3) == Counter({9: 1}))
    record(3, ok, f"D=-3 ranks H4,H5,H8 = {(h.rank(4), h.rank(5), h.rank(8))}; "
                  f"3-part of H7 = {dict(h.degrees[7].sylow(3))}")


def test_criterion_04_homology_minus_seven(complex_of):
    h = homology(complex_of(3, -7))
    ok = (h.rank(5) == 2 and h.degrees[5].sylow(7) == Counter({7: 1})
          and h.degrees[7].sylow(3) == Counter({3: 1}))
    record(4, ok, f"D=-7 rank H5 = {h.rank(5)}; H5 = {h.degrees[5].label()}; H7 = {h.degrees[7].label()}")


def test_criterion_05_mass_formula(complex_of, gl4):
    totals = {case: mass_formula(complex_of(*case)).total for case in COMPUTED}
    cx = complex_of(3, -4)
    truncated = {n: cs[1:] if n == 5 else cs for n, cs in cx.cells.items()}
    negative = mass_formula(truncated).total
    top = mass_formula(gl4)
    signed = {n: (-1) ** n * s for n, s in top.sums.items()}
    ok = (all(t == 0 for t in totals.values()) and negative != 0
          and signed == dict(zip(range(3, 16), GL4_SUMS)) and top.total == 0)
    record(5, ok, f"alternating totals zero on {len(totals)} cases and on GL_4(O_-4), whose 13 "
                  f"per-dimension sums match exactly; dropping one 5-cell gives {negative}")


def test_criterion_06_explicit_cycle(complex_of, gl4):
    cases = {case: xi_cycle_check(complex_of(*case)).ok for case in COMPUTED}
    cx = gl4
    orders = sorted((c.stabilizer.order for c in cx.cells[15]), reverse=True)
    d15 = cx.differentials[15]
    snf = smith_normal_form(d15)
    xi = xi_cycle_check(cx)
    published = smith_normal_form([[0, 0], [1920, -256]])
    ok = (all(cases.values()) and orders == [46080, 6144] and xi.ok and xi.vector == [2, 15]
          and snf.rank == published.rank == 1 and snf.divisors == published.divisors)
    record(6, ok, f"xi is a cycle on {sum(cases.values())}/{len(cases)} cases; GL_4(O_-4) "
                  f"top orders {orders}, d_15 rank {snf.rank}, divisors {dict(snf.divisors)}, "
                  f"xi = {xi.vector}")


def test_criterion_07_chain_identity(complex_of, gl4):
    ok = all(chain_identity(complex_of(*case)) for case in COMPUTED) and chain_identity(gl4)
    record(7, ok, f"d o d = 0 in every degree for {len(COMPUTED)} cases and GL_4(O_-4)")


def _two_entry_rows(cx):
    top = cx.top
    d = cx.differentials.get(top)
    if d is None:
        return 0
    sigma = [cx.cells[top][j].stabilizer.order for j in cx.oriented(top)]
    tau = [cx.cells[top - 1][i].stabilizer.order for i in cx.oriented(top - 1)]
    rows = {}
    for (i, j), x in d.entries.items():
        rows.setdefault(i, []).append((j, x))
    for i, entries in rows.items():
        assert len(entries) == 2, (i, entries)
        for j, x in entries:
            assert abs(x) * tau[i] == sigma[j], (i, j, x)
    return len(rows)


def test_criterion_08_top_differential_structure(complex_of, gl4):
    checked = {case: _two_entry_rows(complex_of(*case)) for case in COMPUTED}
    checked[(4, -4)] = _two_entry_rows(gl4)
    record(8, True, f"nonzero top rows checked per case: {checked}")


def test_criterion_09_torsion_primes(complex_of, gl4):
    seen = {}
    for case in COMPUTED:
        cx = complex_of(*case)
        primes = set()
        for cs in cx.cells.values():
            for c in cs:
                primes |= set(factorize(c.stabilizer.order))
        seen[case] = primes
    seen[(4, -4)] = {p for cs in gl4.cells.values() for c in cs
                     for p in factorize(c.stabilizer.order)}
    ok = all(p <= torsion_prime_bound(*case) for case, p in seen.items()) and 7 in seen[(3, -7)]
    record(9, ok, f"stabilizer primes within the bound everywhere; (3,-7) primes {sorted(seen[(3, -7)])}")


def test_criterion_10_oracle_suites(perfect_of):
    rng = random.Random(10)
    for _ in range(1000):
        K = field(rng.choice([-3, -4, -7, -8, -15, -20]))
        N = rng.randint(1, 3)
        A = HermitianForm(K, N, [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(N * N)])
        v = tuple(rng.randint(-4, 4) for _ in range(2 * N))
        if any(v):
            assert trace_pair(A, rank_one(K, v)) == evaluate(A, v)
    for D in (-3, -4, -7, -8):
        K = field(D)
        for N in (1, 2):
            A = random_form(rng, K, N, spread=2)
            mv = minimal_vectors(A)
            assert (mv.minimum, set(mv.vectors)) == brute_force_minimum(A)
    for _ in range(30):
        M = [[rng.randint(-20, 20) for _ in range(3)] for _ in range(3)]
        assert _divisors_by_minors(M) == smith_normal_form(M).divisors
    P = perfect_of(3, -7)[1]
    for _ in range(3):
        g = random_group_element(rng, -7, 3)
        Q = make_record(g.pullback(P.form))
        w = form_equivalent(P, Q)
        assert w is not None and w.pullback(P.form) == Q.form
    record(10, True, "trace pairing x1000, minimal vectors vs box search, SNF vs minors, "
                     "equivalence witnesses verified")


def _divisors_by_minors(M):
    """Elementary divisors from gcds of k x k minors."""
    n = len(M)
    dets = [1]
    for k in range(1, n + 1):
        g = 0
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, bareiss_det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        dets.append(g)
    return Counter(dets[k] // dets[k - 1] for k in range(1, len(dets)))
