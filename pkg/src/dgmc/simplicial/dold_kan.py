"""Truncation and the Dold-Kan correspondence at finite level.

Complexes are stored in chain grading: ``C_k`` is cochain degree ``-k``, so
a truncated hom complex reads C_0 = Z^0, C_k = P^{-k} for k >= 1, with
boundaries ``d: C_k -> C_{k-1}`` (the cochain differential).

The Dold-Puppe realization is the inverse Dold-Kan functor

    DP(C)_n = (+)_{sigma: [n] ->> [k]} C_k

where a monotone map theta: [m] -> [n] acts on the sigma summand through the
epi-mono factorization of sigma.theta: identity when the mono part is an
identity, the boundary when it is the coface missing 0, zero otherwise.
Normalized chains use the kernels of the faces d_1..d_n with boundary d_0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .. import linalg
from ..dgcat import DGCategory
from ..scalars import Field


@dataclass(frozen=True)
class TruncatedComplex:
    field: Field
    dims: tuple
    boundaries: tuple  # boundaries[k]: C_k -> C_{k-1} as a dims[k-1] x dims[k] matrix; [0] is None
    inclusion: tuple | None = field(default=None, compare=False)  # columns: Z^0 basis in P^0 coordinates

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        while len(dims) > 1 and dims[-1] == 0:
            dims = dims[:-1]
        object.__setattr__(self, "dims", dims)
        bds = [None]
        for k in range(1, len(dims)):
            m = self.boundaries[k] if k < len(self.boundaries) else None
            if m is None:
                m = [[self.field.zero] * dims[k] for _ in range(dims[k - 1])]
            m = tuple(tuple(row) for row in m)
            if len(m) != dims[k - 1] or any(len(row) != dims[k] for row in m):
                raise ValueError(f"boundary {k} has the wrong shape")
            bds.append(m)
        object.__setattr__(self, "boundaries", tuple(bds))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def boundary(self, k: int):
        if 1 <= k < len(self.dims):
            return self.boundaries[k]
        return None

    def apply_boundary(self, k: int, v):
        m = self.boundary(k)
        if m is None:
            return [self.field.zero] * self.dim(k - 1)
        return linalg.matvec(m, v, self.field)

    def is_complex(self) -> bool:
        F = self.field
        for k in range(2, len(self.dims)):
            if not linalg.is_zero_matrix(linalg.matmul(self.boundaries[k - 1], self.boundaries[k], F, self.dims[k - 1])):
                return False
        return True

    def cochain_dims(self) -> dict:
        return {-k: n for k, n in enumerate(self.dims) if n}

    def homology_dim(self, k: int) -> int:
        F = self.field
        n = self.dim(k)
        out = self.boundary(k)
        rk_out = linalg.rank(out, F, n) if out else 0
        inc = self.boundary(k + 1)
        rk_in = linalg.rank(inc, F, self.dim(k + 1)) if inc else 0
        return n - rk_out - rk_in


def _hom_truncation(cat: DGCategory, E, F, dfun) -> TruncatedComplex:
    k = cat.base_field
    degs = cat.degrees(E, F)
    low = min(degs) if degs else 0
    top = max(0, -low)

    def flat_dim(i):
        return cat.dim(E, F, i) * cat.ring.dim

    # Z^0 inside P^0
    basis0 = cat.flat_basis(E, F, 0)
    n0 = len(basis0)
    cols = [cat.flatten(dfun(b)) for b in basis0]
    n1 = flat_dim(1)
    rows = [[cols[c][r] for c in range(n0)] for r in range(n1)]
    Z = linalg.kernel(rows, k, n0) if rows else linalg.identity(n0, k)
    dims = [len(Z)] + [flat_dim(-j) for j in range(1, top + 1)]
    bds = [None]
    for j in range(1, top + 1):
        src = cat.flat_basis(E, F, -j)
        imgs = [cat.flatten(dfun(b)) for b in src]
        if j == 1:
            # express images (which lie in Z^0) in the kernel basis
            zt = linalg.transpose(Z, n0) if Z else [[] for _ in range(n0)]
            coords = []
            for v in imgs:
                c = linalg.solve(zt, v, k, len(Z)) if Z else []
                if c is None:
                    raise ValueError("d^{-1} does not land in Z^0; d^2 != 0")
                coords.append(c)
            imgs = coords
        mat = [[imgs[c][r] for c in range(len(src))] for r in range(dims[j - 1])]
        bds.append(mat)
    inclusion = tuple(tuple(v) for v in Z)
    return TruncatedComplex(k, tuple(dims), tuple(bds), inclusion)


def truncate(source, E=None, F=None) -> TruncatedComplex:
    """tau_{<=0} of a hom complex.

    ``source`` is a TwistedComplex, a DGCategory with objects E, F, or an
    already truncated complex (returned unchanged up to the kernel basis).
    """
    if isinstance(source, TruncatedComplex):
        Fd = source.field
        n0 = source.dim(0)
        return TruncatedComplex(Fd, source.dims, source.boundaries, tuple(tuple(v) for v in linalg.identity(n0, Fd)))
    if isinstance(source, DGCategory):
        return _hom_truncation(source, E, F, source.diff)
    # TwistedComplex
    return _hom_truncation(source.cat, source.source.obj, source.target.obj, source.d)


# -- simplicial abelian groups ---------------------------------------------


def surjections(n: int, k: int):
    """Monotone surjections [n] ->> [k] as value tuples, lexicographic."""
    out = []
    for cuts in itertools.combinations(range(1, n + 1), k):
        seq, v = [], 0
        cs = set(cuts)
        for x in range(n + 1):
            if x in cs:
                v += 1
            seq.append(v)
        out.append(tuple(seq))
    return sorted(out)


def coface(n: int, i: int) -> tuple:
    """delta^i: [n-1] -> [n], skipping i."""
    return tuple(x if x < i else x + 1 for x in range(n))


def codegeneracy(n: int, j: int) -> tuple:
    """sigma^j: [n+1] -> [n], hitting j twice."""
    return tuple(x if x <= j else x - 1 for x in range(n + 2))


class SimplicialAbGroup:
    """Levels 0..N of a simplicial k-vector space, given by face and
    degeneracy matrices (``faces[n][i]: S_n -> S_{n-1}``,
    ``degeneracies[n][j]: S_n -> S_{n+1}``)."""

    def __init__(self, field: Field, ranks, faces, degeneracies):
        self.field = field
        self.ranks = list(ranks)
        self.faces = faces
        self.degeneracies = degeneracies

    @property
    def N(self) -> int:
        return len(self.ranks) - 1

    def face(self, n: int, i: int):
        return self.faces[n][i]

    def degeneracy(self, n: int, j: int):
        return self.degeneracies[n][j]

    def identity_violations(self) -> list:
        """Every simplicial identity that fails up to level N (empty if none)."""
        F = self.field
        bad = []

        def mm(A, B, inner):
            return linalg.matmul(A, B, F, inner)

        def eq(A, B):
            return [list(r) for r in A] == [list(r) for r in B]

        for n in range(2, self.N + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = mm(self.face(n - 1, i), self.face(n, j), self.ranks[n - 1])
                    rhs = mm(self.face(n - 1, j - 1), self.face(n, i), self.ranks[n - 1])
                    if not eq(lhs, rhs):
                        bad.append(("d_i d_j", n, i, j))
        for n in range(0, self.N):
            ident = linalg.identity(self.ranks[n], F)
            for j in range(n + 1):
                s = self.degeneracy(n, j)
                for i in range(n + 2):
                    lhs = mm(self.face(n + 1, i), s, self.ranks[n + 1])
                    if i < j:
                        rhs = mm(self.degeneracy(n - 1, j - 1), self.face(n, i), self.ranks[n - 1])
                    elif i in (j, j + 1):
                        rhs = ident
                    else:
                        rhs = mm(self.degeneracy(n - 1, j), self.face(n, i - 1), self.ranks[n - 1])
                    if not eq(lhs, rhs):
                        bad.append(("d_i s_j", n, i, j))
        for n in range(0, self.N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    lhs = mm(self.degeneracy(n + 1, i), self.degeneracy(n, j), self.ranks[n + 1])
                    rhs = mm(self.degeneracy(n + 1, j + 1), self.degeneracy(n, i), self.ranks[n + 1])
                    if not eq(lhs, rhs):
                        bad.append(("s_i s_j", n, i, j))
        return bad

    def check_identities(self) -> bool:
        return not self.identity_violations()


class DoldPuppe(SimplicialAbGroup):
    """DP(C) up to level N with an explicit action of any monotone map."""

    def __init__(self, C: TruncatedComplex, N: int):
        if N < 0:
            raise ValueError("N must be >= 0")
        self.C = C
        self.summands = []  # per level: list of (sigma, k, offset)
        self.index = []
        ranks = []
        for n in range(N + 1):
            lst, idx, off = [], {}, 0
            for k in range(0, min(n, C.top) + 1):
                if not C.dim(k):
                    continue
                for sigma in surjections(n, k):
                    lst.append((sigma, k, off))
                    idx[sigma] = (k, off)
                    off += C.dim(k)
            self.summands.append(lst)
            self.index.append(idx)
            ranks.append(off)
        self.field, self.ranks = C.field, ranks
        faces = [[]] + [[self.operator_matrix(coface(n, i), n - 1, n) for i in range(n + 1)] for n in range(1, N + 1)]
        degs = [[self.operator_matrix(codegeneracy(n, j), n + 1, n) for j in range(n + 1)] for n in range(N)]
        super().__init__(C.field, ranks, faces, degs)

    def apply(self, theta: tuple, x, n: int | None = None) -> list:
        """theta^*: DP_n -> DP_m for monotone theta: [m] -> [n] (value tuple)."""
        F = self.field
        C = self.C
        m = len(theta) - 1
        if n is None:
            n = max(theta) if theta else 0
        out = [F.zero] * self.ranks[m]
        for sigma, k, off in self.summands[n]:
            block = x[off:off + C.dim(k)]
            if all(c == 0 for c in block):
                continue
            comp = [sigma[t] for t in theta]
            img = sorted(set(comp))
            j = len(img) - 1
            epi = tuple(img.index(v) for v in comp)
            if img == list(range(k + 1)):
                vec = block
            elif k >= 1 and img == list(range(1, k + 1)):
                vec = C.apply_boundary(k, block)
            else:
                continue
            if j > C.top or not C.dim(j):
                continue
            _, toff = self.index[m][epi]
            for r, c in enumerate(vec):
                if c != 0:
                    out[toff + r] = F.add(out[toff + r], c)
        return out

    def operator_matrix(self, theta: tuple, m: int, n: int):
        F = self.field
        cols = []
        for b in range(self.ranks[n]):
            e = [F.zero] * self.ranks[n]
            e[b] = F.one
            cols.append(self.apply(theta, e, n))
        return [[cols[c][r] for c in range(self.ranks[n])] for r in range(self.ranks[m])]

    def nondegenerate_block(self, n: int, x) -> list:
        """Component of x in the summand of id_[n] (the copy of C_n)."""
        hit = self.index[n].get(tuple(range(n + 1)))
        if hit is None:
            return []
        k, off = hit
        return list(x[off:off + self.C.dim(k)])

    def embed_chain(self, n: int, v) -> list:
        """The copy of v in C_n inside DP_n."""
        F = self.field
        out = [F.zero] * self.ranks[n]
        hit = self.index[n].get(tuple(range(n + 1)))
        if hit is not None:
            _, off = hit
            out[off:off + len(v)] = list(v)
        return out


def dold_puppe(C: TruncatedComplex, N: int) -> DoldPuppe:
    return DoldPuppe(C, N)


def expected_rank(C: TruncatedComplex, n: int) -> int:
    from math import comb
    return sum(comb(n, k) * C.dim(k) for k in range(0, min(n, C.top) + 1))


@dataclass
class Normalization:
    complex: TruncatedComplex
    bases: list  # bases[n]: list of vectors of S_n spanning N_n


def normalize(S: SimplicialAbGroup) -> Normalization:
    """Normalized chains: N_n = intersection of ker d_i for i >= 1, boundary d_0."""
    F = S.field
    bases = []
    for n in range(S.N + 1):
        rows = []
        for i in range(1, n + 1):
            rows.extend(S.face(n, i))
        bases.append(linalg.kernel(rows, F, S.ranks[n]) if rows else linalg.identity(S.ranks[n], F))
    dims = [len(b) for b in bases]
    bds = [None]
    for n in range(1, S.N + 1):
        prev = bases[n - 1]
        pt = linalg.transpose(prev, S.ranks[n - 1]) if prev else [[] for _ in range(S.ranks[n - 1])]
        cols = []
        for v in bases[n]:
            w = linalg.matvec(S.face(n, 0), v, F)
            c = linalg.solve(pt, w, F, len(prev)) if prev else []
            if c is None:
                raise ValueError("d_0 leaves the normalized subcomplex; simplicial identities fail")
            cols.append(c)
        bds.append([[cols[c][r] for c in range(len(cols))] for r in range(len(prev))])
    # drop trailing zero levels
    return Normalization(TruncatedComplex(F, tuple(dims), tuple(bds)), bases)


def roundtrip_isomorphism(C: TruncatedComplex, N: int):
    """Chain isomorphism C -> N(DP(C)) in degrees 0..N, or None if the
    natural inclusion is not one (it always is when the code is right)."""
    F = C.field
    S = DoldPuppe(C, N)
    norm = normalize(S)
    maps = []
    for n in range(N + 1):
        basis = norm.bases[n]
        bt = linalg.transpose(basis, S.ranks[n]) if basis else [[] for _ in range(S.ranks[n])]
        cols = []
        for b in range(C.dim(n)):
            e = [F.zero] * C.dim(n)
            e[b] = F.one
            c = linalg.solve(bt, S.embed_chain(n, e), F, len(basis)) if basis else None
            if c is None:
                return None
            cols.append(c)
        if len(basis) != C.dim(n):
            return None
        mat = [[cols[c][r] for c in range(len(cols))] for r in range(len(basis))]
        if mat and linalg.rank(mat, F, len(cols)) != len(basis):
            return None
        maps.append(mat)
    NC = norm.complex
    for n in range(1, N + 1):
        if not C.dim(n) or not C.dim(n - 1):
            continue
        lhs = linalg.matmul(maps[n - 1], C.boundary(n), F, C.dim(n - 1))
        rhs = linalg.matmul(NC.boundary(n), maps[n], F, NC.dim(n))
        if lhs != rhs:
            return None
    return maps
