import pytest

from hermvor.cells import build_cells, orientation_action
from hermvor.hermitian import f_rank, q_coords
from hermvor.isometry import GroupElement, VectorConfig, find_equivalence, set_orbits
from hermvor.linalg import rank
from hermvor.number_field import field
from hermvor.polyhedra import Cone, compute_facets

CASES = [(2, -4), (2, -7), (3, -4), (3, -3), (3, -7)]


@pytest.mark.parametrize("N,D", CASES)
def test_top_cells_are_the_perfect_forms(complex_of, perfect_of, N, D):
    cx = complex_of(N, D)
    assert len(cx.cells[N * N - 1]) == len(perfect_of(N, D))
    assert all(c.orientable for c in cx.cells[N * N - 1])


@pytest.mark.parametrize("N,D", CASES)
def test_dimensions_and_well_roundedness(complex_of, N, D):
    cx = complex_of(N, D)
    K = field(D)
    assert min(n for n, cs in cx.cells.items() if cs) >= N - 1
    for n, cs in cx.cells.items():
        for c in cs:
            assert rank(c.coords) == n + 1
            assert f_rank(K, c.vectors) == N


@pytest.mark.parametrize("N,D", [(3, -4), (3, -7)])
def test_face_closure(complex_of, N, D):
    """Every well-rounded facet of every representative fuses to exactly one representative."""
    cx = complex_of(N, D)
    K = field(D)
    for n, cs in cx.cells.items():
        if n - 1 not in cx.cells:
            continue
        lower = cx.cells[n - 1]
        for sigma in cs:
            cone = compute_facets(Cone(sigma.coords))
            wr = [s for s in cone.facet_sets
                  if f_rank(K, [sigma.vectors[i] for i in s]) == N]
            assert sum(l.orbit_size for l in sigma.faces) == len(wr)
            for l in sigma.faces:
                facet = VectorConfig(K, N, [sigma.vectors[i] for i in l.facet])
                hits = [j for j, tau in enumerate(lower) if find_equivalence(facet, tau.config)]
                assert hits == [l.target]


@pytest.mark.parametrize("N,D", [(3, -4), (3, -8)])
def test_discarded_faces_have_small_rank(complex_of, N, D):
    cx = complex_of(N, D)
    K = field(D)
    for n, cs in cx.cells.items():
        for sigma in cs:
            cone = compute_facets(Cone(sigma.coords))
            kept = [tuple(sorted(s)) for s in cone.facet_sets]
            orbits = set_orbits(K, sigma.vectors, kept, sigma.stabilizer.generators)
            reached = {frozenset(kept[k]) for o in orbits for k in o
                       if any(frozenset(kept[o[0]]) == frozenset(l.facet) for l in sigma.faces)}
            for s in cone.facet_sets:
                wr = f_rank(K, [sigma.vectors[i] for i in s]) == N
                assert wr == (frozenset(s) in reached)


def test_orientation_action_trivial_cases(complex_of):
    cx = complex_of(3, -3)
    K = field(-3)
    for cs in cx.cells.values():
        for c in cs:
            assert orientation_action(GroupElement.identity(-3, 3), c) == 1
            for u in K.units:
                assert orientation_action(GroupElement.scalar(-3, 3, u), c) == 1


@pytest.mark.parametrize("N,D", CASES)
def test_top_stabilizers_preserve_orientation(complex_of, N, D):
    cx = complex_of(N, D)
    for c in cx.cells[N * N - 1]:
        assert all(orientation_action(g, c) == 1 for g in c.stabilizer.generators)


def test_span_check_rejects_foreign_elements(complex_of):
    cx = complex_of(3, -4)
    sigma = cx.cells[2][0]
    swap = GroupElement(-4, (((0, 0), (1, 0), (0, 0)), ((0, 0), (0, 0), (1, 0)), ((1, 0), (0, 0), (0, 0))))
    images = {tuple(q_coords(sigma.K, swap(v))) for v in sigma.vectors}
    if images != {tuple(x) for x in sigma.coords}:
        with pytest.raises(ValueError):
            orientation_action(swap, sigma)


def test_gl3_gaussian_cell_counts(complex_of):
    """Regression pin; the counts are cross-checked by the mass formula and the homology."""
    cx = complex_of(3, -4)
    counts = {n: len(cx.cells.get(n, [])) for n in range(2, 9)}
    assert counts == {8: 1, 7: 1, 6: 3, 5: 5, 4: 4, 3: 3, 2: 2}


def test_build_is_deterministic(perfect_of):
    a = build_cells(perfect_of(3, -7))
    b = build_cells(perfect_of(3, -7))
    for n in a.cells:
        assert [c.vectors for c in a.cells[n]] == [c.vectors for c in b.cells[n]]
        assert a.differentials.get(n, None) == b.differentials.get(n, None)


def test_empty_degrees_give_zero_rows(complex_of):
    from hermvor.cells import summarize

    rows = {r.n: r for r in summarize(complex_of(3, -4))}
    assert rows[0].cells == rows[1].cells == 0 and rows[0].nnz == 0
    assert rows[8].stabilizers == {384: 1}
