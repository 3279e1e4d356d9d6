"""Cells of the Voronoi complex modulo GL_N(O) and its differentials.

Cells are cones spanned by ``q(v)`` for a finite set of O-vectors.  Starting
from the perfect cones, faces are found one dimension at a time through the
facets of the representatives of the dimension above.  Faces whose vectors do
not span F^N lie on the boundary and are dropped; the rest are fused into
orbits.  The dimension of a cell is its span rank minus one.

Orientation conventions
-----------------------
Each cell carries an ordered basis of its linear span, the first maximal
independent subset of its ``q(v)`` with vectors in canonical order.  A facet
``tau'`` of ``sigma`` is oriented by putting one generator of ``sigma`` that is
not on ``tau'`` in front of the basis of ``tau'``; the incidence number is the
sign of this basis against the basis of ``sigma``.  When ``tau'`` is carried to
its orbit representative ``tau`` by ``gamma``, the basis used for ``tau'`` is
the image of the basis of ``tau`` under ``gamma^-1``.  Top-dimensional cells are
all oriented by the coordinates of the space of Hermitian forms, which the group
preserves; with this choice the stabilizer-weighted sum of top cells is a cycle.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .hermitian import q_coords
from .isometry import (
    GroupElement, StabilizerGroup, VectorConfig, find_equivalence, set_orbits, stabilizer,
)
from .linalg import det_sign, independent_subset, pivot_columns, rank
from .number_field import field as number_field
from .polyhedra import Cone, compute_facets

log = logging.getLogger(__name__)


@dataclass
class FaceLink:
    """One orbit of facets of a cell under its stabilizer.

    ``facet`` indexes the vectors of the owning cell, ``target`` is the index
    of the representative in the dimension below and ``witness`` carries the
    facet onto it.
    """

    facet: tuple
    orbit_size: int
    target: int
    witness: GroupElement
    sign: int = 0


@dataclass
class Cell:
    config: VectorConfig
    dim: int
    stabilizer: StabilizerGroup | None = None
    orientable: bool = True
    faces: list = field(default_factory=list)

    @property
    def K(self):
        return self.config.K

    @property
    def N(self):
        return self.config.N

    @property
    def vectors(self):
        return self.config.vectors

    @property
    def coords(self):
        K = self.K
        return [q_coords(K, v) for v in self.vectors]

    @property
    def orientation_basis(self) -> list[int]:
        """Indices of the vectors whose ``q(v)`` form the oriented basis."""
        if not hasattr(self, "_obasis"):
            self._obasis = independent_subset(self.coords)
            rows = [self.coords[i] for i in self._obasis]
            self._pivots = pivot_columns(rows)
            if len(rows) == self.N * self.N:
                # full-dimensional cells all carry the orientation of the ambient space
                self._base_sign = 1
            else:
                self._base_sign = det_sign([[r[c] for c in self._pivots] for r in rows])
        return self._obasis

    @property
    def pivots(self):
        self.orientation_basis
        return self._pivots

    @property
    def base_sign(self):
        self.orientation_basis
        return self._base_sign

    def stabilizer_order(self) -> int:
        return self.stabilizer.order

    def sign_of(self, rows) -> int:
        """Sign of an ordered basis of the span (given as coordinate rows)."""
        piv = self.pivots
        return det_sign([[r[c] for c in piv] for r in rows]) * self.base_sign


def orientation_action(gamma: GroupElement, sigma: Cell, check: bool = True) -> int:
    """Sign of ``A -> gamma A gamma^*`` on the span of a cell it preserves."""
    K = sigma.K
    basis = [sigma.vectors[i] for i in sigma.orientation_basis]
    images = [q_coords(K, gamma(v)) for v in basis]
    base = [sigma.coords[i] for i in sigma.orientation_basis]
    if check and rank(base + images) != len(base):
        raise ValueError("group element does not preserve the span of the cell")
    s = sigma.sign_of(images) * sigma.sign_of(base)
    if s == 0:
        raise ValueError("group element does not map the span onto itself")
    return s


def incidence(sigma: Cell, link: FaceLink, tau: Cell) -> int:
    """Incidence sign of one facet of ``sigma`` against its representative ``tau``."""
    if not (sigma.orientable and tau.orientable):
        return 0
    K = sigma.K
    facet = set(link.facet)
    out = next(i for i in range(len(sigma.vectors)) if i not in facet)
    back = link.witness.inverse()
    rows = [sigma.coords[out]]
    rows += [q_coords(K, back(tau.vectors[i])) for i in tau.orientation_basis]
    s = sigma.sign_of(rows)
    if s == 0:
        raise AssertionError("transported facet basis is degenerate")
    return s


def _is_orientable(cell: Cell) -> bool:
    return all(orientation_action(g, cell, check=False) == 1 for g in cell.stabilizer.generators)


def _stabilizer_job(cfg):
    return stabilizer(cfg)


@dataclass
class DifferentialMatrix:
    """Sparse integer matrix of ``d_n : V_n -> V_{n-1}``."""

    degree: int
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)   # (row, col) -> nonzero int

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def dense(self):
        M = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            M[i][j] = x
        return M

    def column(self, j):
        return {i: x for (i, jj), x in self.entries.items() if jj == j}


@dataclass
class VoronoiComplex:
    N: int
    D: int
    cells: dict                       # dim -> list[Cell]
    differentials: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return self.N * self.N - 1

    @property
    def dims(self):
        return sorted(self.cells)

    def oriented(self, n: int) -> list[int]:
        """Indices (into ``cells[n]``) of the orientable cells, the basis of V_n."""
        return [i for i, c in enumerate(self.cells.get(n, [])) if c.orientable]

    def rank_of_chain_group(self, n: int) -> int:
        return len(self.oriented(n))


def _new_cell(K, N, vectors, dim):
    return Cell(VectorConfig(K, N, vectors), dim)


def build_cells(perfect, workers: int = 1, min_dim: int = 0) -> VoronoiComplex:
    """Orbit representatives of all cells meeting the interior, top dimension down.

    ``min_dim`` stops the descent early; the complex is then truncated and
    only the differentials between computed dimensions are meaningful.
    """
    perfect = list(perfect)
    if not perfect:
        raise ValueError("no perfect forms given")
    N, D = perfect[0].N, perfect[0].D
    K = number_field(D)
    top = N * N - 1
    cells = {top: []}
    for P in perfect:
        c = Cell(P.config, top, P.stabilizer)
        cells[top].append(c)
    _finish(cells[top], workers)
    n = top
    while n > min_dim and cells.get(n):
        below = _descend(K, N, cells[n], n - 1)
        if not below:
            break
        cells[n - 1] = below
        _finish(below, workers)
        log.info("N=%d D=%d: %d cells in dimension %d", N, D, len(below), n - 1)
        n -= 1
    cx = VoronoiComplex(N, D, cells)
    assemble_differentials(cx)
    return cx


def _finish(reps, workers):
    todo = [c for c in reps if c.stabilizer is None]
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(workers) as ex:
            for c, st in zip(todo, ex.map(_stabilizer_job, [c.config for c in todo])):
                c.stabilizer = st
    else:
        for c in todo:
            c.stabilizer = stabilizer(c.config)
    for c in reps:
        c.orientable = _is_orientable(c)


def _descend(K, N, upper, dim):
    """Representatives of ``dim``-cells as facets of the ``dim+1`` representatives."""
    reps: list[Cell] = []
    by_key: dict = {}
    for sigma in upper:
        cone = compute_facets(Cone(sigma.coords))
        vecs = sigma.vectors
        keep = []
        for s in cone.facet_sets:
            sub = [vecs[i] for i in sorted(s)]
            if VectorConfig(K, N, sub).is_well_rounded:
                keep.append(tuple(sorted(s)))
        orbits = set_orbits(K, vecs, keep, sigma.stabilizer.generators)
        links = []
        for orbit in orbits:
            facet = keep[orbit[0]]
            cand = _new_cell(K, N, [vecs[i] for i in facet], dim)
            if cand.config.rank != dim + 1:
                raise AssertionError("facet has the wrong dimension")
            key = cand.config.invariant
            target = witness = None
            for j in by_key.get(key, ()):
                g = find_equivalence(cand.config, reps[j].config)
                if g is not None:
                    target, witness = j, g
                    break
            if target is None:
                target = len(reps)
                reps.append(cand)
                by_key.setdefault(key, []).append(target)
                witness = GroupElement.identity(K.D, N)
            links.append(FaceLink(facet, len(orbit), target, witness))
        sigma.faces = links
    return reps


def assemble_differentials(cx: VoronoiComplex, recompute_signs: bool = True):
    """Fill ``cx.differentials[n]`` for every n with cells in degrees n and n-1.

    With ``recompute_signs=False`` the incidence signs already stored on the
    face links are used as they are (for complexes read back from disk).
    """
    cx.differentials = {}
    for n in cx.dims:
        if n - 1 not in cx.cells:
            continue
        rows = {i: r for r, i in enumerate(cx.oriented(n - 1))}
        cols = cx.oriented(n)
        d = DifferentialMatrix(n, len(rows), len(cols))
        lower = cx.cells[n - 1]
        for c, j in enumerate(cols):
            sigma = cx.cells[n][j]
            for link in sigma.faces:
                tau = lower[link.target]
                if recompute_signs:
                    link.sign = incidence(sigma, link, tau)
                if link.target in rows and link.sign:
                    key = (rows[link.target], c)
                    val = d.entries.get(key, 0) + link.sign * link.orbit_size
                    if val:
                        d.entries[key] = val
                    else:
                        d.entries.pop(key, None)
        cx.differentials[n] = d
    return cx


@dataclass
class DegreeRow:
    """One line of the per-degree table."""

    n: int
    cells: int
    stabilizers: dict        # order -> multiplicity
    oriented: int
    nnz: int
    rank: int
    divisors: dict           # elementary divisor -> multiplicity


def summarize(cx: VoronoiComplex) -> list[DegreeRow]:
    from .homology import smith_normal_form

    out = []
    for n in range(cx.top, -1, -1):
        cs = cx.cells.get(n, [])
        orders = Counter(c.stabilizer.order for c in cs)
        d = cx.differentials.get(n)
        if d is not None and d.nnz:
            snf = smith_normal_form(d)
            rk, divs = snf.rank, dict(sorted(snf.divisors.items()))
        else:
            rk, divs = 0, {}
        out.append(DegreeRow(n, len(cs), dict(sorted(orders.items())), len(cx.oriented(n)),
                             d.nnz if d is not None else 0, rk, divs))
    return out
