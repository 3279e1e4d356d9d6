"""Exact polyhedral cones: dual description, facets and ranks.

Facets are computed by the double-description method on integer data.  A cone
that is not full-dimensional is first projected onto a set of coordinates on
which its linear span projects isomorphically, so the working cone is always
full-dimensional and pointed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .linalg import independent_subset, pivot_columns, primitive, rank, solve


def span_rank(vectors) -> int:
    """Exact rank over Q of a list of coordinate vectors."""
    vectors = list(vectors)
    if not vectors:
        return 0
    return rank(vectors)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _prim(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _bitset(bools) -> int:
    """Python int with bit k set iff ``bools[k]``."""
    packed = np.packbits(np.asarray(bools, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _ray_values(rays, g):
    """``rays @ g`` exactly; int64 when the products provably fit."""
    bound = int(np.abs(rays).max()) * max(abs(x) for x in g) * len(g) if len(rays) else 0
    if rays.dtype != object and bound < 2 ** 62:
        return rays @ np.asarray(g, dtype=np.int64)
    return np.array([sum(int(a) * b for a, b in zip(r, g)) for r in rays], dtype=object)


def _double_description(gens: list[tuple[int, ...]]):
    """Extreme rays of ``{h : <h, g> >= 0 for all g}`` for full-rank integer ``gens``.

    Returns a list of ``(ray, zero_mask)`` where bit ``i`` of ``zero_mask`` is set
    iff ``<ray, gens[i]> == 0``.  Zero sets are kept as packed uint64 words so
    that candidate pairs are filtered in bulk; the combinatorial adjacency test
    intersects, per generator, the bitset of rays vanishing on it.
    """
    m = len(gens)
    r = len(gens[0])
    W = (m + 63) // 64
    base = independent_subset(gens)[:r]
    if len(base) < r:
        raise ValueError("generators do not span the working space")
    B = [gens[i] for i in base]
    init = [primitive(solve(B, [int(k == c) for c in range(r)])) for k in range(r)]
    big = max(abs(x) for row in init for x in row) >= 2 ** 31
    rays = np.array(init, dtype=object if big else np.int64)
    masks = np.zeros((r, W), dtype=np.uint64)
    for k in range(r):
        for kk, i in enumerate(base):
            if kk != k:
                masks[k, i // 64] |= np.uint64(1) << np.uint64(i % 64)

    need = r - 2
    processed = list(base)
    for j in range(m):
        if j in base:
            continue
        word, bit = j // 64, np.uint64(1) << np.uint64(j % 64)
        vals = _ray_values(rays, gens[j])
        pos = np.nonzero(vals > 0)[0]
        neg = np.nonzero(vals < 0)[0]
        zero = vals == 0
        masks[zero, word] |= bit
        processed.append(j)
        if len(neg) == 0:
            continue
        # rays (as bitsets over ray indices) whose zero set contains each processed generator
        has = {i: _bitset((masks[:, i // 64] >> np.uint64(i % 64)) & np.uint64(1)) for i in processed}
        new_rays, new_masks = [], []
        mn = masks[neg]
        everything = (1 << len(rays)) - 1
        for p in pos:
            common = masks[p] & mn
            cnt = np.bitwise_count(common).sum(axis=1)
            for t in np.nonzero(cnt >= need)[0]:
                c = common[t]
                inter = everything
                for i in processed:
                    if (int(c[i // 64]) >> (i % 64)) & 1:
                        inter &= has[i]
                # only p and the negative ray themselves may contain the common zero set
                if bin(inter).count("1") != 2:
                    continue
                n = neg[t]
                vp, vn = vals[p], vals[n]
                ray = [int(vp) * int(b) - int(vn) * int(a) for a, b in zip(rays[p], rays[n])]
                new_rays.append(_prim(ray))
                cm = c.copy()
                cm[word] |= bit
                new_masks.append(cm)
        keep = np.nonzero(vals >= 0)[0]
        rays_list = [tuple(int(x) for x in rays[k]) for k in keep] + new_rays
        big = any(abs(x) >= 2 ** 31 for row in new_rays for x in row) or rays.dtype == object
        rays = np.array(rays_list, dtype=object if big else np.int64).reshape(len(rays_list), r)
        masks = np.concatenate([masks[keep], np.array(new_masks, dtype=np.uint64).reshape(-1, W)])
    out = []
    for k in range(len(rays)):
        mask = 0
        for w in range(W):
            mask |= int(masks[k, w]) << (64 * w)
        out.append((tuple(int(x) for x in rays[k]), mask))
    return out


@dataclass
class Cone:
    """Polyhedral cone spanned by integer coordinate vectors.

    ``facets`` holds, per facet, a primitive integer functional on the ambient
    coordinates (non-negative on the cone) and the set of generator indices
    on which it vanishes.
    """

    generators: list
    dim: int = 0
    facet_normals: list | None = None
    facet_sets: list | None = None
    pivots: list = field(default_factory=list)

    def __post_init__(self):
        self.generators = [tuple(g) for g in self.generators]
        if not self.generators:
            raise ValueError("a cone needs at least one generator")
        self.dim = span_rank(self.generators)


def working_coordinates(generators):
    """Pivot coordinates on which the span of ``generators`` projects isomorphically."""
    idx = independent_subset(generators)
    return pivot_columns([generators[i] for i in idx])


def dual_description(generators) -> list[tuple[int, ...]]:
    """Facet normals (primitive integer functionals) of the cone spanned by ``generators``.

    Normals are unique up to the annihilator of the span; the representative
    returned is supported on the working coordinates.
    """
    cone = Cone(list(generators))
    compute_facets(cone)
    return list(cone.facet_normals)


def compute_facets(cone: Cone) -> Cone:
    gens = [tuple(int(x) for x in primitive(g)) for g in cone.generators]
    piv = working_coordinates(gens)
    cone.pivots = piv
    work = [tuple(g[c] for c in piv) for g in gens]
    d = len(gens[0])
    normals, sets = [], []
    if cone.dim == 1:
        # a single ray: its only facet is the apex
        h = [0] * d
        h[piv[0]] = 1 if work[0][0] > 0 else -1
        normals.append(tuple(h))
        sets.append(frozenset())
    else:
        for ray, mask in _double_description(work):
            h = [0] * d
            for c, x in zip(piv, ray):
                h[c] = x
            normals.append(tuple(h))
            sets.append(frozenset(i for i in range(len(gens)) if mask >> i & 1))
    order = sorted(range(len(normals)), key=lambda k: (sorted(sets[k]), normals[k]))
    cone.facet_normals = [normals[k] for k in order]
    cone.facet_sets = [sets[k] for k in order]
    return cone


def faces_of_codim_one(cone: Cone, vectors):
    """``[(normal, sub-vector-set)]`` for each facet; ``vectors[i]`` belongs to generator i."""
    if cone.facet_normals is None:
        compute_facets(cone)
    vectors = list(vectors)
    return [(h, tuple(vectors[i] for i in sorted(s)))
            for h, s in zip(cone.facet_normals, cone.facet_sets)]


def extreme_rays(generators) -> list[int]:
    """Indices of generators spanning extreme rays (dual of the dual)."""
    cone = compute_facets(Cone(list(generators)))
    n = len(cone.generators)
    out = []
    # a generator is extreme iff the facets containing it cut out exactly its ray
    for i in range(n):
        containing = [k for k, s in enumerate(cone.facet_sets) if i in s]
        if cone.dim == 1:
            out.append(i)
            continue
        rows = [cone.facet_normals[k] for k in containing]
        if rows and rank([[x for c, x in enumerate(r) if c in cone.pivots] for r in rows]) == cone.dim - 1:
            out.append(i)
    return out
