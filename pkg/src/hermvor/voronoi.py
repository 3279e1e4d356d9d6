"""Voronoi's algorithm for perfect Hermitian forms over an imaginary quadratic field.

All forms are normalised to minimum 1.  Perfect forms are found by walking the
graph whose edges are facet flips of the perfect cones, and the walk is closed
up to GL_N(O)-equivalence.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .hermitian import (
    HermitianForm, MinVectorSet, evaluate, functional_to_form, minimal_vectors,
    q_coords, shortest_vectors,
)
from .isometry import StabilizerGroup, VectorConfig, find_equivalence, set_orbits, stabilizer
from .linalg import nullspace
from .number_field import field as number_field
from .polyhedra import Cone, compute_facets, span_rank

log = logging.getLogger(__name__)


class ExplorationError(RuntimeError):
    pass


@dataclass
class PerfectFormRecord:
    """A perfect form with minimum 1 together with its Voronoi data."""

    form: HermitianForm
    min_vectors: MinVectorSet
    cone: Cone | None = None
    neighbors: list = field(default_factory=list)   # (facet index, class id)
    _stabilizer: StabilizerGroup | None = None
    _config: VectorConfig | None = None

    @property
    def N(self):
        return self.form.N

    @property
    def D(self):
        return self.form.K.D

    @property
    def config(self) -> VectorConfig:
        if self._config is None:
            self._config = VectorConfig(self.form.K, self.N, self.min_vectors.vectors)
        return self._config

    @property
    def stabilizer(self) -> StabilizerGroup:
        if self._stabilizer is None:
            self._stabilizer = stabilizer(self.config)
        return self._stabilizer

    @property
    def stabilizer_order(self) -> int:
        return self.stabilizer.order

    def facets(self):
        if self.cone is None:
            self.cone = Cone([q_coords(self.form.K, v) for v in self.min_vectors.vectors])
        if self.cone.facet_normals is None:
            compute_facets(self.cone)
        return self.cone.facet_normals, self.cone.facet_sets

    def facet_vectors(self, k):
        _, sets = self.facets()
        vecs = self.min_vectors.vectors
        return tuple(vecs[i] for i in sorted(sets[k]))

    def key(self):
        """Sort key used for deterministic output order."""
        return (-len(self.min_vectors), self.form.det(), self.form.coords)


def make_record(A: HermitianForm) -> PerfectFormRecord:
    mv = minimal_vectors(A)
    if mv.minimum != 1:
        raise ValueError(f"form has minimum {mv.minimum}, expected 1")
    return PerfectFormRecord(A, mv)


def is_perfect(A: HermitianForm) -> bool:
    mv = minimal_vectors(A)
    return span_rank([q_coords(A.K, v) for v in mv.vectors]) == A.N * A.N


def _step_size(A: HermitianForm, H: HermitianForm, keep, max_iter: int = 200):
    """Smallest ``rho > 0`` such that ``A + rho H`` has minimum 1 attained outside ``keep``.

    ``H`` vanishes on ``q(v)`` for ``v`` in ``keep`` and is not positive
    semidefinite.  Floating point never decides: every trial form is tested
    exactly.
    """
    keep = set(keep)
    lo, hi = Fraction(0), None
    u = Fraction(1)
    for _ in range(max_iter):
        B = A + H.scale(u)
        if not B.is_positive_definite():
            hi = u
            u = (lo + hi) / 2
            continue
        m, vecs = shortest_vectors(B)
        if m < 1:
            break
        if m == 1 and any(v not in keep for v in vecs):
            return u, B
        # still inside the cone of A: the step is larger than u
        lo = u
        u = 2 * u if hi is None else (lo + hi) / 2
    else:
        raise ExplorationError("no blocking vector found")
    for _ in range(max_iter):
        u = min((evaluate(A, w) - 1) / -evaluate(H, w) for w in vecs)
        B = A + H.scale(u)
        m, vecs = shortest_vectors(B)
        if m == 1:
            return u, B
        if m > 1:
            raise ExplorationError("minimum overshot; inconsistent step")
    raise ExplorationError("step size search did not converge")


def initial_perfect_form(N: int, D: int, max_iter: int = 100) -> PerfectFormRecord:
    """A perfect form reached from the identity by the perfection procedure."""
    K = number_field(D)
    A = HermitianForm.identity(K, N)
    for _ in range(max_iter):
        mv = minimal_vectors(A)
        rows = [q_coords(K, v) for v in mv.vectors]
        r = span_rank(rows)
        if r == N * N:
            return make_record(A)
        f = nullspace(rows, N * N)[0]
        H = functional_to_form(K, N, f)
        if H.trace() > 0:
            H = H.scale(-1)
        _, A = _step_size(A, H, mv.vectors)
        assert span_rank([q_coords(K, v) for v in minimal_vectors(A).vectors]) > r
    raise ExplorationError("perfection did not terminate")


def neighbor(P: PerfectFormRecord, facet: int) -> PerfectFormRecord:
    """The perfect form on the other side of the given facet of ``P``'s cone."""
    normals, sets = P.facets()
    K, N = P.form.K, P.N
    H = functional_to_form(K, N, normals[facet])
    keep = P.facet_vectors(facet)
    _, B = _step_size(P.form, H, keep)
    rec = make_record(B)
    if not set(keep) <= set(rec.min_vectors.vectors):
        raise ExplorationError("neighbor lost facet vectors")
    if span_rank([q_coords(K, v) for v in rec.min_vectors.vectors]) != N * N:
        raise ExplorationError("neighbor is not perfect")
    return rec


def facet_orbits(P: PerfectFormRecord):
    """Partition of facet indices into orbits of the stabilizer of ``P``."""
    _, sets = P.facets()
    return set_orbits(P.form.K, P.min_vectors.vectors, sets, P.stabilizer.generators)


def classify(rec: PerfectFormRecord, known: list[PerfectFormRecord]):
    """Index of the class of ``rec`` among ``known`` (or None) and a witness."""
    for i, R in enumerate(known):
        if R.config.invariant != rec.config.invariant:
            continue
        g = find_equivalence(rec.config, R.config)
        if g is not None:
            return i, g
    return None, None


def enumerate_perfect_forms(N: int, D: int, checkpoint=None, use_symmetry: bool = True,
                            facet_order=None) -> list[PerfectFormRecord]:
    """One representative per GL_N(O)-class of perfect forms with minimum 1.

    ``checkpoint`` is an optional :class:`hermvor.storage.PerfectFormCheckpoint`;
    exploration resumes from it and appends every new class as it is found.
    """
    classes: list[PerfectFormRecord] = []
    done: set[int] = set()
    if checkpoint is not None:
        classes, done = checkpoint.load(N, D)
    if not classes:
        classes = [initial_perfect_form(N, D)]
        if checkpoint is not None:
            checkpoint.add_class(classes[0])
    if N == 1:
        # the only cone is a ray; its apex is not a flippable facet
        return classes
    i = 0
    while i < len(classes):
        if i in done:
            i += 1
            continue
        P = classes[i]
        normals, _ = P.facets()
        if use_symmetry:
            orbits = facet_orbits(P)
        else:
            orbits = [[k] for k in range(len(normals))]
        if facet_order is not None:
            orbits = facet_order(orbits)
        links = {}
        for orbit in orbits:
            rec = neighbor(P, orbit[0])
            j, _ = classify(rec, classes)
            if j is None:
                j = len(classes)
                classes.append(rec)
                log.info("N=%d D=%d: class %d found (|M|=%d)", N, D, j, len(rec.min_vectors))
                if checkpoint is not None:
                    checkpoint.add_class(rec)
            for k in orbit:
                links[k] = j
        P.neighbors = sorted(links.items())
        done.add(i)
        if checkpoint is not None:
            checkpoint.mark_done(i, P.neighbors, P.stabilizer)
        i += 1
    return _sorted_classes(classes)


def _sorted_classes(classes):
    order = sorted(range(len(classes)), key=lambda i: classes[i].key())
    new_id = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        P = classes[old]
        P.neighbors = [(k, new_id[j]) for k, j in P.neighbors]
        out.append(P)
    return out
