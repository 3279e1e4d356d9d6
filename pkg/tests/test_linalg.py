import random
from fractions import Fraction

from hermvor.linalg import bareiss_det, independent_subset, nullspace, pivot_columns, primitive, rank, solve


def test_primitive_clears_denominators():
    assert primitive([Fraction(1, 2), Fraction(-3, 4), 0]) == [2, -3, 0]
    assert primitive([0, 0]) == [0, 0]


def test_bareiss_against_permutation_expansion():
    import itertools

    rng = random.Random(3)
    for n in range(1, 6):
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if perm[i] > perm[j]:
                        sign = -sign
            prod = sign
            for i in range(n):
                prod *= M[i][perm[i]]
            total += prod
        assert bareiss_det(M) == total


def test_nullspace_and_rank():
    rng = random.Random(5)
    for _ in range(50):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        ker = nullspace(M, n)
        assert rank(M) + len(ker) == n
        for v in ker:
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in M)


def test_independent_subset_and_pivots():
    rows = [(1, 2, 3), (2, 4, 6), (0, 1, 1), (1, 3, 4)]
    idx = independent_subset(rows)
    assert idx == [0, 2]
    piv = pivot_columns([rows[i] for i in idx])
    assert rank([[rows[i][c] for c in piv] for i in idx]) == 2


def test_solve():
    A = [[2, 1], [1, 3]]
    assert solve(A, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
