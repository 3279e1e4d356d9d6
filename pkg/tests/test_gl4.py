"""GL_4 over the Gaussian integers: the one rank-4 case built in full."""
from collections import Counter

from hermvor.cells import build_cells
from hermvor.homology import homology


def test_homology_ranks(gl4):
    h = homology(gl4)
    assert {n: r for n, r in h.ranks().items() if r} == {6: 1, 7: 2, 9: 1, 10: 1, 12: 1, 15: 1}
    primes = {p for d in h.degrees.values() for t in d.torsion for p in (2, 3, 5, 7) if t % p == 0}
    assert primes == {2, 3, 5}


def test_top_cells(gl4):
    assert Counter(c.stabilizer.order for c in gl4.cells[15]) == Counter({46080: 1, 6144: 1})
    assert [len(c.vectors) for c in gl4.cells[15]] == [60, 28]
    assert len(gl4.cells[14]) == 7


def test_partial_build_agrees_with_full(complex_of, perfect_of):
    full = complex_of(3, -7)
    part = build_cells(perfect_of(3, -7), min_dim=6)
    assert sorted(part.cells) == [6, 7, 8]
    for n in (6, 7, 8):
        assert [c.vectors for c in part.cells[n]] == [c.vectors for c in full.cells[n]]
    for n in (7, 8):
        assert part.differentials[n].entries == full.differentials[n].entries
