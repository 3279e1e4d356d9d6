"""GL_N(O)-equivalence and stabilizers of vector configurations.

A cell (or a perfect form) is represented here by its finite set of O-vectors,
canonical up to units.  The group acts by ``gamma . v = gamma v``; two cells are
equivalent when some ``gamma`` carries one vector set onto the other up to unit
scalars.  The search is a backtrack that assigns images to an F-basis chosen
from the vectors, pruned by the values of an equivariant Hermitian pairing
``<v, w> = v^* adj(A) w`` with ``A = sum q(v)``.  Once a basis is assigned the
candidate ``gamma`` is determined; integrality, unit determinant and stability
of the whole vector set are then checked exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .hermitian import HermitianForm, f_rank, q_coords
from .number_field import QuadField, canonical, field, scale_vector

# ----------------------------------------------------------------------------
# small matrices over O, entries are integer pairs


def _det(K: QuadField, M):
    """Determinant of a square matrix of pairs by Laplace expansion."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        a = K.mul(M[0][0], M[1][1])
        b = K.mul(M[0][1], M[1][0])
        return (a[0] - b[0], a[1] - b[1])
    tot = (0, 0)
    for j in range(n):
        if M[0][j] == (0, 0):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = K.mul(M[0][j], _det(K, minor))
        if j % 2:
            tot = (tot[0] - t[0], tot[1] - t[1])
        else:
            tot = (tot[0] + t[0], tot[1] + t[1])
    return tot


def _adjugate(K: QuadField, M):
    n = len(M)
    if n == 1:
        return [[(1, 0)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            d = _det(K, minor)
            if (i + j) % 2:
                d = (-d[0], -d[1])
            adj[j][i] = d
    return adj


def _apply(K: QuadField, mat, v):
    out = []
    N = len(mat)
    for r in range(N):
        a = b = 0
        row = mat[r]
        for s in range(N):
            x0, x1 = v[2 * s], v[2 * s + 1]
            if x0 or x1:
                m0, m1 = row[s]
                bd = m1 * x1
                a += m0 * x0 - K.n * bd
                b += m0 * x1 + m1 * x0 + K.t * bd
        out.append(a)
        out.append(b)
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    """An element of GL_N(O) given by its matrix of integer pairs."""

    D: int
    matrix: tuple

    @property
    def K(self) -> QuadField:
        return field(self.D)

    @property
    def N(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, D: int, N: int):
        return cls(D, tuple(tuple((1, 0) if i == j else (0, 0) for j in range(N))
                            for i in range(N)))

    @classmethod
    def scalar(cls, D: int, N: int, u):
        return cls(D, tuple(tuple(tuple(u) if i == j else (0, 0) for j in range(N))
                            for i in range(N)))

    def __call__(self, v):
        return _apply(self.K, self.matrix, v)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        K, N = self.K, self.N
        out = []
        for i in range(N):
            row = []
            for j in range(N):
                a = b = 0
                for k in range(N):
                    x = K.mul(self.matrix[i][k], other.matrix[k][j])
                    a += x[0]
                    b += x[1]
                row.append((a, b))
            out.append(tuple(row))
        return GroupElement(self.D, tuple(out))

    @cached_property
    def determinant(self):
        return _det(self.K, [list(r) for r in self.matrix])

    def is_invertible(self) -> bool:
        return self.K.norm(self.determinant) == 1

    def inverse(self) -> "GroupElement":
        K = self.K
        d = self.determinant
        adj = _adjugate(K, [list(r) for r in self.matrix])
        out = tuple(tuple(K.divide_exact(x, d) for x in row) for row in adj)
        if any(x is None for row in out for x in row):
            raise ValueError("matrix is not invertible over O")
        return GroupElement(self.D, out)

    def conjugate_transpose(self) -> "GroupElement":
        K = self.K
        N = self.N
        return GroupElement(self.D, tuple(tuple(K.conj(self.matrix[j][i]) for j in range(N))
                                          for i in range(N)))

    def act_on_form(self, A: HermitianForm) -> HermitianForm:
        """``gamma A gamma^*``."""
        return _matrix_form(A.K, _mul_f(A.K, _mul_f(A.K, self._fmat(), _form_mat(A)),
                                        self.conjugate_transpose()._fmat()))

    def pullback(self, A: HermitianForm) -> HermitianForm:
        """``gamma^* A gamma`` (so that ``pullback(A)[x] = A[gamma x]``)."""
        return _matrix_form(A.K, _mul_f(A.K, _mul_f(A.K, self.conjugate_transpose()._fmat(),
                                                    _form_mat(A)), self._fmat()))

    def _fmat(self):
        return [[tuple(x) for x in row] for row in self.matrix]

    def to_json(self):
        return [[[int(a), int(b)] for a, b in row] for row in self.matrix]

    @classmethod
    def from_json(cls, D, data):
        return cls(D, tuple(tuple((int(a), int(b)) for a, b in row) for row in data))


def _form_mat(A: HermitianForm):
    return [[A.entry(i, j) for j in range(A.N)] for i in range(A.N)]


def _mul_f(K, X, Y):
    n = len(X)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            a = b = 0
            for k in range(n):
                x = K.mul(X[i][k], Y[k][j])
                a += x[0]
                b += x[1]
            row.append((a, b))
        out.append(row)
    return out


def _matrix_form(K, M) -> HermitianForm:
    return HermitianForm.from_entries(K, M)


# ----------------------------------------------------------------------------
# vector configurations


class VectorConfig:
    """A finite set of O-vectors (canonical up to units) with equivariant data."""

    def __init__(self, K: QuadField | int, N: int, vectors):
        if isinstance(K, int):
            K = field(K)
        self.K = K
        self.N = N
        self.vectors = tuple(sorted({canonical(K, tuple(v)) for v in vectors}, reverse=True))
        self.index = {v: i for i, v in enumerate(self.vectors)}
        self.units = K.units

    def __len__(self):
        return len(self.vectors)

    # -- equivariant pairing ------------------------------------------------------
    @cached_property
    def form_sum(self):
        """``sum q(v)`` as a matrix of integer pairs."""
        K, N = self.K, self.N
        S = [[(0, 0)] * N for _ in range(N)]
        for v in self.vectors:
            for i in range(N):
                vi = (v[2 * i], v[2 * i + 1])
                for j in range(N):
                    x = K.mul_conj((v[2 * j], v[2 * j + 1]), vi)
                    S[i][j] = (S[i][j][0] + x[0], S[i][j][1] + x[1])
        return S

    @cached_property
    def pairing(self):
        """``adj(sum q(v))`` (a positive multiple of the inverse when well rounded)."""
        return _adjugate(self.K, self.form_sum)

    @cached_property
    def gram(self):
        """``gram[i][j] = v_i^* P v_j`` over canonical vectors, as integer pairs."""
        K, P = self.K, self.pairing
        Pv = [_apply(K, P, v) for v in self.vectors]
        N = self.N
        out = []
        for v in self.vectors:
            row = []
            for w in Pv:
                a = b = 0
                for i in range(N):
                    vi0, vi1 = v[2 * i], v[2 * i + 1]
                    if vi0 or vi1:
                        x = K.mul_conj((vi0, vi1), (w[2 * i], w[2 * i + 1]))
                        a += x[0]
                        b += x[1]
                row.append((a, b))
            out.append(row)
        return out

    @cached_property
    def fingerprints(self):
        K = self.K
        return [(row[i][0], tuple(sorted(K.norm(x) for x in row)))
                for i, row in enumerate(self.gram)]

    @cached_property
    def invariant(self):
        """Equivalence-class invariant: equal for equivalent configurations."""
        return (len(self.vectors), self.rank,
                hash(tuple(sorted(self.fingerprints))), _det(self.K, self.form_sum)[0])

    @cached_property
    def rank(self) -> int:
        from .polyhedra import span_rank
        return span_rank([q_coords(self.K, v) for v in self.vectors])

    @cached_property
    def is_well_rounded(self) -> bool:
        return f_rank(self.K, self.vectors) == self.N

    # -- search data ---------------------------------------------------------------
    @cached_property
    def basis(self):
        """Indices of an F-basis chosen greedily by rarity of fingerprint."""
        if not self.is_well_rounded:
            raise ValueError("isometry search needs a well-rounded configuration")
        counts = {}
        for fp in self.fingerprints:
            counts[fp] = counts.get(fp, 0) + 1
        order = sorted(range(len(self.vectors)), key=lambda i: (counts[self.fingerprints[i]], i))
        chosen = []
        for i in order:
            if f_rank(self.K, [self.vectors[j] for j in chosen + [i]]) == len(chosen) + 1:
                chosen.append(i)
                if len(chosen) == self.N:
                    break
        return chosen

    @cached_property
    def basis_inverse(self):
        """``(adj(B), det(B))`` for the matrix B with the basis vectors as columns."""
        K, N = self.K, self.N
        B = [[(self.vectors[b][2 * r], self.vectors[b][2 * r + 1]) for b in self.basis]
             for r in range(N)]
        return _adjugate(K, B), _det(K, B)


def _unit_gram(K, u1, u2, g):
    """``conj(u1) * u2 * g``."""
    return K.mul(K.mul_conj(u1, u2), g)


def _candidates(src: VectorConfig, dst: VectorConfig, level: int, images):
    """Possible images ``(unit index, canon index)`` for basis vector ``level``."""
    K = src.K
    bi = src.basis[level]
    fp = src.fingerprints[bi]
    target = [src.gram[src.basis[j]][bi] for j in range(level)]
    out = []
    units = dst.units
    for c in range(len(dst.vectors)):
        if dst.fingerprints[c] != fp:
            continue
        if level == 0:
            out.append((0, c))
            continue
        for ui, u in enumerate(units):
            ok = True
            for j in range(level):
                uj, cj = images[j]
                if _unit_gram(K, units[uj], u, dst.gram[cj][c]) != target[j]:
                    ok = False
                    break
            if ok:
                out.append((ui, c))
    return out


def _build(src: VectorConfig, dst: VectorConfig, images):
    """The matrix determined by the assignment, if it is a valid equivalence."""
    K, N = src.K, src.N
    adjB, detB = src.basis_inverse
    cols = [scale_vector(K, dst.units[u], dst.vectors[c]) for u, c in images]
    mat = []
    for r in range(N):
        row = []
        for s in range(N):
            a = b = 0
            for k in range(N):
                x = K.mul((cols[k][2 * r], cols[k][2 * r + 1]), adjB[k][s])
                a += x[0]
                b += x[1]
            e = K.divide_exact((a, b), detB)
            if e is None:
                return None
            row.append(e)
        mat.append(tuple(row))
    mat = tuple(mat)
    for v in src.vectors:
        if canonical(K, _apply(K, mat, v)) not in dst.index:
            return None
    g = GroupElement(K.D, mat)
    if not g.is_invertible():
        return None
    return g


def _search(src: VectorConfig, dst: VectorConfig, prefix=()):
    """First ``gamma`` with ``gamma(src) = dst`` extending the prefix of basis images."""
    N = src.N
    images = list(prefix)

    def rec(level):
        if level == N:
            return _build(src, dst, images)
        for cand in _candidates(src, dst, level, images):
            images.append(cand)
            g = rec(level + 1)
            images.pop()
            if g is not None:
                return g
        return None

    return rec(len(images))


def find_equivalence(src: VectorConfig, dst: VectorConfig):
    """``gamma`` in GL_N(O) with ``gamma . src = dst`` (up to units), or None."""
    if src.N != dst.N or src.K.D != dst.K.D:
        return None
    if src.invariant != dst.invariant:
        return None
    if not src.is_well_rounded:
        raise ValueError("equivalence search needs a well-rounded configuration")
    g = _search(src, dst)
    if g is not None:
        _verify_map(src, dst, g)
    return g


def _verify_map(src, dst, g):
    K = src.K
    image = {canonical(K, g(v)) for v in src.vectors}
    if image != set(dst.vectors) or not g.is_invertible():
        raise AssertionError("equivalence witness failed verification")


def form_equivalent(A, B):
    """``gamma`` with ``gamma^* A gamma = B`` for perfect forms of minimum 1, or None.

    Both arguments carry ``form`` and ``min_vectors`` (perfect form records).
    A perfect form is determined by its minimal vectors, so it is enough to
    carry ``M(B)`` onto ``M(A)`` and then confirm the pullback exactly.
    """
    K, N = A.form.K, A.form.N
    src = VectorConfig(K, N, B.min_vectors.vectors)
    dst = VectorConfig(K, N, A.min_vectors.vectors)
    g = find_equivalence(src, dst)
    if g is None:
        return None
    if g.pullback(A.form) != B.form:
        raise AssertionError("form equivalence witness failed verification")
    return g


def cell_equivalent(sigma, tau):
    """``gamma`` with ``gamma . M(sigma) = M(tau)`` up to units, or None."""
    if sigma.dim != tau.dim or len(sigma.config) != len(tau.config):
        return None
    return find_equivalence(sigma.config, tau.config)


def vector_permutation(K: QuadField, vectors, g) -> list[int]:
    """``perm[i] = j`` when ``g`` carries ``vectors[i]`` to ``vectors[j]`` up to units."""
    index = {v: i for i, v in enumerate(vectors)}
    return [index[canonical(K, g(v))] for v in vectors]


def set_orbits(K: QuadField, vectors, sets, generators):
    """Orbits of index sets (into ``vectors``) under the given group elements."""
    vectors = list(vectors)
    perms = [vector_permutation(K, vectors, g) for g in generators]
    keys = [frozenset(s) for s in sets]
    by_set = {s: k for k, s in enumerate(keys)}
    seen = set()
    orbits = []
    for k, s in enumerate(keys):
        if k in seen:
            continue
        seen.add(k)
        orbit = [k]
        stack = [s]
        while stack:
            cur = stack.pop()
            for perm in perms:
                j = by_set[frozenset(perm[i] for i in cur)]
                if j not in seen:
                    seen.add(j)
                    orbit.append(j)
                    stack.append(keys[j])
        orbits.append(sorted(orbit))
    return orbits


# ----------------------------------------------------------------------------
# stabilizers


def factorize(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass
class StabilizerGroup:
    """Stabilizer of a vector configuration in GL_N(O).

    ``generators`` together with the unit scalars generate the group.
    """

    generators: list
    order: int
    order_factorization: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.order_factorization:
            self.order_factorization = factorize(self.order)

    @property
    def primes(self):
        return sorted(self.order_factorization)


def _perm_of(cfg: VectorConfig, g: GroupElement):
    """Action of ``g`` on ``(unit, canon)`` labels as a dict."""
    K = cfg.K
    units = cfg.units
    uindex = {u: i for i, u in enumerate(units)}
    out = {}
    for c, v in enumerate(cfg.vectors):
        w = g(v)
        cw = canonical(K, w)
        d = cfg.index[cw]
        # w = u * cw; find u
        for ui, u in enumerate(units):
            if scale_vector(K, u, cw) == w:
                break
        for uj, u2 in enumerate(units):
            out[(uj, c)] = (uindex[K.mul(u2, u)], d)
    return out


def _orbit(start, perms, project=None):
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for p in perms:
            y = p[x]
            if project is not None:
                y = project(y)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def stabilizer(cfg: VectorConfig) -> StabilizerGroup:
    """Generators and exact order of ``{gamma : gamma . cfg = cfg}``.

    The order is computed along the chain ``G > H_1 > ... > H_N = 1`` where
    ``H_k`` fixes the first k basis vectors; each orbit is closed under the
    elements found at its level, and only unreached candidates are searched.
    """
    K, N = cfg.K, cfg.N
    nu = len(cfg.units)
    order = nu
    gens = []
    base = [(0, b) for b in cfg.basis]
    for level in range(N):
        prefix = base[:level]
        cands = _candidates(cfg, cfg, level, prefix)
        start = base[level]
        level_perms = []
        if level == 0:
            project = lambda x: (0, x[1])
        else:
            project = None
        orbit = {start}
        dead = set()
        for cand in cands:
            if cand in orbit or cand in dead:
                continue
            g = _search(cfg, cfg, tuple(prefix) + (cand,))
            if g is None:
                dead |= _orbit(cand, level_perms, project)
                continue
            _verify_map(cfg, cfg, g)
            gens.append(g)
            level_perms.append(_perm_of(cfg, g))
            orbit = _orbit(start, level_perms, project)
        order *= len(orbit)
    return StabilizerGroup(gens, order)


# ----------------------------------------------------------------------------
# torsion primes


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def torsion_prime_bound(N: int, D: int) -> set[int]:
    """Primes that may divide the order of a finite subgroup of GL_N(O_D)."""
    out = {2}
    for p in range(3, 2 * N + 2):
        if not _is_prime(p):
            continue
        if p - 1 <= N:
            out.add(p)
        elif p % 4 == 3 and D == -p and (p - 1) // 2 <= N:
            out.add(p)
    return out
