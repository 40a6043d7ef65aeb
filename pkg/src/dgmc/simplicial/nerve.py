"""Bisimplicial nerve, Segal comparison, and the invertible interior.

(N A)_{n,m} is the disjoint union over object strings x_0..x_n of the
products of level-m hom simplices DP(A(x_{i-1}, x_i))_m.  Levels are kept
structurally (object string plus per-factor ranks) and materialized only over
finite fields under a size guard.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..dgcat import DGCategory, base_change
from ..mc import MCObject, h0_inverse, mc_category
from ..scalars import Field
from ..variety import curvature_ideal, enumerate_points
from .category import Simplex, SimplicialCategory


class MaterializationError(ValueError):
    pass


def _check_finite(F: Field):
    if not F.is_finite:
        raise MaterializationError(f"cannot materialize over the infinite field {F.name}")


def _vectors(F: Field, n: int):
    return itertools.product(list(F.elements()), repeat=n)


class NerveSlice:
    def __init__(self, C: SimplicialCategory, N: int | None = None, limit: int = 200_000):
        self.C = C
        self.N = C.N if N is None else N
        if self.N > C.N:
            raise ValueError("nerve cap exceeds the hom simplicial cap")
        self.limit = limit
        self._drop = {}

    @property
    def field(self) -> Field:
        return self.C.field

    def strings(self, n: int):
        return list(itertools.product(self.C.objects, repeat=n + 1))

    def level(self, n: int, m: int) -> list:
        """[(object string, per-factor ranks)] for (N A)_{n,m}."""
        out = []
        for xs in self.strings(n):
            ranks = tuple(self.C.hom(xs[i - 1], xs[i]).rank(m) for i in range(1, n + 1))
            out.append((xs, ranks))
        return out

    def cardinality(self, n: int, m: int) -> int:
        _check_finite(self.field)
        q = self.field.order
        return sum(q ** sum(r) for _, r in self.level(n, m))

    def materialize(self, n: int, m: int) -> list:
        """Elements (object string, tuple of Simplex) of (N A)_{n,m}."""
        _check_finite(self.field)
        size = self.cardinality(n, m)
        if size > self.limit:
            raise MaterializationError(f"level ({n},{m}) has {size} elements, over the limit {self.limit}")
        out = []
        for xs, ranks in self.level(n, m):
            homs = [self.C.hom(xs[i - 1], xs[i]) for i in range(1, n + 1)]
            factors = [[H.simplex(m, v) for v in _vectors(self.field, r)] for H, r in zip(homs, ranks)]
            for choice in itertools.product(*factors):
                out.append((xs, tuple(choice)))
        drop = self._drop.get((n, m))
        if drop is not None and out:
            del out[drop % len(out)]
        return out

    def corrupted(self, n: int, m: int, index: int = 0) -> "NerveSlice":
        """A copy whose materialized level (n, m) is missing one element."""
        bad = NerveSlice(self.C, self.N, self.limit)
        bad._drop = dict(self._drop)
        bad._drop[(n, m)] = index
        return bad

    # structure maps
    def face_h(self, i: int, elem):
        """Face in the nerve direction: drop an end or compose two neighbours."""
        xs, ss = elem
        n = len(xs) - 1
        if i == 0:
            return xs[1:], ss[1:]
        if i == n:
            return xs[:-1], ss[:-1]
        comp = self.C.compose(ss[i], ss[i - 1])
        return xs[:i] + xs[i + 1:], ss[:i - 1] + (comp,) + ss[i + 1:]

    def face_v(self, i: int, elem):
        """Face in the simplicial-hom direction, applied factorwise."""
        xs, ss = elem
        out = []
        for s in ss:
            H = self.C.hom(s.source, s.target)
            out.append(H.simplex(s.level - 1, H.DP.apply(_coface(s.level, i), list(s.vec), s.level)))
        return xs, tuple(out)

    def segal_map(self, elem) -> tuple:
        xs, ss = elem
        return tuple(((xs[i - 1], xs[i]), (ss[i - 1],)) for i in range(1, len(xs)))


def _coface(n, i):
    return tuple(x if x < i else x + 1 for x in range(n))


def nerve_slice(C, N: int | None = None, limit: int = 200_000) -> NerveSlice:
    if isinstance(C, DGCategory):
        C = SimplicialCategory(C, N if N is not None else C.bound + 2)
    return NerveSlice(C, N, limit)


def _fiber_product(edges: list, n: int) -> list:
    """Chains of n composable edges, each edge being ((x, y), (s,))."""
    by_source = {}
    for e in edges:
        by_source.setdefault(e[0][0], []).append(e)
    chains = [(e,) for e in edges]
    for _ in range(n - 1):
        chains = [c + (e,) for c in chains for e in by_source.get(c[-1][0][1], [])]
    return chains


def segal_check(slice: NerveSlice, n: int, m: int, materialize: bool | None = None) -> bool:
    """Is the Segal map (N A)_{n,m} -> (N A)_{1,m} x ... x (N A)_{1,m} bijective?"""
    if n < 2:
        raise ValueError("the Segal comparison needs n >= 2")
    # structural: both sides are indexed by composable object strings with
    # the same factor ranks
    lhs = sorted(slice.level(n, m))
    edges = slice.level(1, m)
    rhs = [(xs, ()) for xs, _ in slice.level(0, m)]
    for _ in range(n):
        rhs = [(xs + (e[0][1],), r + e[1]) for xs, r in rhs for e in edges if e[0][0] == xs[-1]]
    if lhs != sorted(rhs):
        return False
    if materialize is None:
        materialize = slice.field.is_finite
    if not materialize:
        return True
    left = slice.materialize(n, m)
    images = [slice.segal_map(x) for x in left]
    target = _fiber_product([slice.segal_map(e)[0] for e in slice.materialize(1, m)], n)
    if len(set(images)) != len(images):
        return False
    return set(images) == set(target) and len(images) == len(target)


# -- interior ----------------------------------------------------------------


class Interior:
    """Sub-nerve of simplices whose vertices are invertible in H^0."""

    def __init__(self, C: SimplicialCategory, limit: int = 200_000):
        self.C = C
        self.slice = NerveSlice(C, C.N, limit)
        self.limit = limit
        self._inv = {}
        self._counts = {}

    def _mc(self, X):
        return MCObject(X, self.C.cat.zero(X, X, 1))

    def vertex_invertible(self, X, Y, vertex) -> bool:
        key = (X, Y, tuple(vertex))
        if key not in self._inv:
            H = self.C.hom(X, Y)
            f = H.to_element(0, vertex)
            self._inv[key] = h0_inverse(f, self._mc(X), self._mc(Y)) is not None
        return self._inv[key]

    def simplex_invertible(self, s: Simplex) -> bool:
        H = self.C.hom(s.source, s.target)
        for i in range(s.level + 1):
            v = H.DP.apply((i,), list(s.vec), s.level)
            if not self.vertex_invertible(s.source, s.target, v):
                return False
        return True

    def member(self, elem) -> bool:
        return all(self.simplex_invertible(s) for s in elem[1])

    def invertible_vertices(self, X, Y) -> int:
        """Number of invertible elements of Z^0(X, Y), by enumeration."""
        if (X, Y) not in self._counts:
            F = self.C.field
            _check_finite(F)
            H = self.C.hom(X, Y)
            n0 = H.rank(0)
            if F.order ** n0 > self.limit:
                raise MaterializationError(f"Z^0({X},{Y}) has {F.order ** n0} elements, over the limit")
            self._counts[(X, Y)] = sum(1 for v in _vectors(F, n0) if self.vertex_invertible(X, Y, v))
        return self._counts[(X, Y)]

    def count(self, n: int) -> int:
        """|(A^es)_n| = sum over strings of products of invertible level-n simplices.

        All vertices of a hom simplex share one H^0 class, and the vertex map
        DP_n -> DP_0 is a split surjection, so each factor contributes
        (#invertible vertices) * q^(rank_n - rank_0)."""
        q = self.C.field.order
        total = 0
        for xs in self.slice.strings(n):
            prod = 1
            for i in range(1, n + 1):
                X, Y = xs[i - 1], xs[i]
                H = self.C.hom(X, Y)
                prod *= self.invertible_vertices(X, Y) * q ** (H.rank(n) - H.rank(0))
                if not prod:
                    break
            total += prod
        return total

    def materialize(self, n: int) -> list:
        return [e for e in self.slice.materialize(n, n) if self.member(e)]


def interior_diagonal(C, N: int | None = None, materialize: bool = False, limit: int = 200_000) -> list:
    """Levels 0..N of the diagonal of the interior: counts, or element lists."""
    if isinstance(C, DGCategory):
        C = SimplicialCategory(C, N if N is not None else C.bound + 2)
    N = C.N if N is None else N
    I = Interior(C, limit)
    if materialize:
        return [I.materialize(n) for n in range(N + 1)]
    return [I.count(n) for n in range(N + 1)]


@dataclass
class PrestackValue:
    ring: object
    objects: list  # MCObject list, in order
    N: int
    counts: list | None
    interior: Interior = field(repr=False)

    def emit(self) -> str:
        lines = ["# mc prestack value", f"ring: {self.ring.name}", f"N: {self.N}", f"objects: {len(self.objects)}"]
        for X in self.objects:
            lines.append(f"  {X.name}: {X.obj} eta=({', '.join(self.ring.format(c) for c in X.eta.coeffs)})")
        if self.counts is not None:
            for n, c in enumerate(self.counts):
                lines.append(f"level {n}: {c}")
        return "\n".join(lines) + "\n"


def mc_objects_over(P: DGCategory, R, objects=None, limit: int = 2_000_000):
    """(P (x) R, MC objects): all of them over a finite R, else the given ones.

    ``objects`` may hold MCObjects of P (x) R or (object, coefficients) pairs."""
    PR = P if R == P.ring else base_change(P, R)
    out = []
    if objects is None:
        if not R.is_finite:
            raise MaterializationError("MC objects over an infinite ring must be listed explicitly")
        for E in P.objects:
            for n, z in enumerate(enumerate_points(curvature_ideal(P, E), R, limit)):
                out.append(MCObject(E, PR.element(E, E, 1, list(z)), f"{E}:{n}"))
        return PR, out
    for n, X in enumerate(objects):
        if isinstance(X, MCObject):
            out.append(X)
        else:
            E, coeffs = X
            out.append(MCObject(E, PR.element(E, E, 1, list(coeffs)), f"{E}:{n}"))
    return PR, out


def mc_prestack_value(P: DGCategory, R, N: int | None = None, objects=None,
                      limit: int = 200_000) -> PrestackValue:
    """Interior levels 0..N of MC(P (x) R); counts only when R is finite."""
    N = P.bound + 2 if N is None else N
    PR, mcs = mc_objects_over(P, R, objects)
    A = mc_category(PR, mcs)
    C = SimplicialCategory(A, N)
    I = Interior(C, limit)
    counts = [I.count(n) for n in range(N + 1)] if R.is_finite else None
    return PrestackValue(R, mcs, N, counts, I)
