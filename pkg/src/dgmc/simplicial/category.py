"""Composition of simplices in the simplicial category DP(tau<=0 A(X, Y)).

An m-simplex x of DP(C) is the same thing as a chain map N(Delta^m) -> C:
for an injective theta: [p] -> [m] its value is the copy of C_p in
theta^*(x).  Products go through the Alexander-Whitney diagonal of
N(Delta^m), then the dg composition on each front/back pair, and are
realized back as a simplex by an exact linear solve.  Alexander-Whitney is
strictly coassociative and counital, so the product is strictly associative
and unital at every level.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .. import linalg
from ..dgcat import DGCategory, Element
from .dold_kan import DoldPuppe, TruncatedComplex, truncate


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Simplex:
    source: object
    target: object
    level: int
    vec: tuple

    def __repr__(self):
        return f"<{self.source}->{self.target} level {self.level}: {self.vec}>"


def injections(p: int, m: int):
    """Strictly increasing maps [p] -> [m] as value tuples."""
    return itertools.combinations(range(m + 1), p + 1)


class HomSimplices:
    """DP(tau<=0 A(X, Y)) up to level N, with conversions to A-elements."""

    def __init__(self, cat: DGCategory, X, Y, N: int):
        self.cat = cat
        self.X, self.Y, self.N = X, Y, N
        self.C: TruncatedComplex = truncate(cat, X, Y)
        self.DP = DoldPuppe(self.C, N)
        self.field = self.C.field
        self._realize = {}

    def rank(self, m: int) -> int:
        return self.DP.ranks[m]

    # chain vectors <-> A-elements
    def to_element(self, k: int, v) -> Element:
        cat = self.cat
        if k == 0:
            n0 = cat.dim(self.X, self.Y, 0) * cat.ring.dim
            flat = [self.field.zero] * n0
            for c, z in zip(v, self.C.inclusion):
                if c != 0:
                    flat = [self.field.add(a, self.field.mul(c, b)) for a, b in zip(flat, z)]
            return cat.unflatten(self.X, self.Y, 0, flat)
        return cat.unflatten(self.X, self.Y, -k, list(v))

    def from_element(self, a: Element) -> list:
        k = -a.degree
        flat = self.cat.flatten(a)
        if k > 0:
            return flat
        if k < 0:
            raise CompositionError("positive degree elements are not simplices")
        Z = self.C.inclusion
        if not Z:
            if any(x != 0 for x in flat):
                raise CompositionError("element is not a cocycle")
            return []
        c = linalg.solve(linalg.transpose(Z, len(flat)), flat, self.field, len(Z))
        if c is None:
            raise CompositionError("degree-0 element is not a cocycle")
        return c

    def vertex_element(self, s: Simplex, i: int = 0) -> Element:
        """The i-th vertex of s as a closed degree-0 element of A."""
        v = self.DP.apply((i,), list(s.vec), s.level)
        return self.to_element(0, v)

    def simplex(self, m: int, vec) -> Simplex:
        vec = tuple(vec)
        if len(vec) != self.rank(m):
            raise CompositionError(f"level {m} simplices of {self.X}->{self.Y} have {self.rank(m)} coordinates")
        return Simplex(self.X, self.Y, m, vec)

    def from_cocycle(self, a: Element) -> Simplex:
        return self.simplex(0, self.from_element(a))

    def degenerate(self, s: Simplex, m: int) -> Simplex:
        """s pulled back along the unique map [m] -> [s.level] when s.level == 0."""
        if s.level != 0:
            raise CompositionError("only vertices can be made totally degenerate")
        return self.simplex(m, self.DP.apply((0,) * (m + 1), list(s.vec), 0))

    def chain_map(self, s: Simplex) -> dict:
        """theta -> vector in C_p for each injective theta: [p] -> [m]."""
        out = {}
        for p in range(0, min(s.level, self.C.top) + 1):
            if not self.C.dim(p):
                continue
            for theta in injections(p, s.level):
                y = self.DP.apply(theta, list(s.vec), s.level)
                out[theta] = self.DP.nondegenerate_block(p, y)
        return out

    def _realize_matrix(self, m: int):
        if m not in self._realize:
            keys = [(p, theta) for p in range(0, min(m, self.C.top) + 1) if self.C.dim(p) for theta in injections(p, m)]
            F = self.field
            cols = []
            for b in range(self.rank(m)):
                e = [F.zero] * self.rank(m)
                e[b] = F.one
                cm = self.chain_map(Simplex(self.X, self.Y, m, tuple(e)))
                col = []
                for p, theta in keys:
                    col.extend(cm[theta])
                cols.append(col)
            nrows = sum(self.C.dim(p) for p, _ in keys)
            rows = [[cols[c][r] for c in range(len(cols))] for r in range(nrows)]
            self._realize[m] = (keys, rows)
        return self._realize[m]

    def realize(self, m: int, values: dict) -> Simplex:
        """The unique m-simplex with the given chain-map values."""
        keys, rows = self._realize_matrix(m)
        F = self.field
        rhs = []
        for p, theta in keys:
            v = values.get(theta)
            rhs.extend(v if v is not None else [F.zero] * self.C.dim(p))
        if not rows:
            return self.simplex(m, [])
        x = linalg.solve(rows, rhs, F, self.rank(m))
        if x is None:
            raise CompositionError("values do not form a chain map N(Delta^m) -> C")
        return self.simplex(m, x)


class SimplicialCategory:
    """The simplicial category with hom sets DP(tau<=0 A(X, Y)), levels <= N."""

    def __init__(self, cat: DGCategory, N: int):
        self.cat = cat
        self.N = N
        self._homs = {}

    @property
    def objects(self):
        return list(self.cat.objects)

    @property
    def field(self):
        return self.cat.base_field

    def hom(self, X, Y) -> HomSimplices:
        if (X, Y) not in self._homs:
            self._homs[(X, Y)] = HomSimplices(self.cat, X, Y, self.N)
        return self._homs[(X, Y)]

    def identity(self, X, m: int = 0) -> Simplex:
        H = self.hom(X, X)
        return H.degenerate(H.from_cocycle(self.cat.identity(X)), m)

    def compose(self, s: Simplex, t: Simplex) -> Simplex:
        """s . t for s: Y -> Z and t: X -> Y at the same level."""
        if s.level != t.level:
            raise CompositionError(f"level mismatch: {s.level} vs {t.level}")
        if t.target != s.source:
            raise CompositionError(f"cannot compose {s.source}->{s.target} after {t.source}->{t.target}")
        m = s.level
        Hs, Ht = self.hom(s.source, s.target), self.hom(t.source, t.target)
        Hout = self.hom(t.source, s.target)
        cs, ct = Hs.chain_map(s), Ht.chain_map(t)
        F = self.field
        values = {}
        for p in range(0, min(m, Hout.C.top) + 1):
            if not Hout.C.dim(p):
                continue
            for theta in injections(p, m):
                acc = None
                for i in range(p + 1):
                    front, back = theta[:i + 1], theta[i:]
                    # theta restricted to [0..i] feeds the left factor
                    if front not in cs or back not in ct:
                        continue
                    b = Hs.to_element(i, cs[front])
                    a = Ht.to_element(p - i, ct[back])
                    prod = b @ a
                    acc = prod if acc is None else acc + prod
                if acc is not None:
                    values[theta] = Hout.from_element(acc)
                else:
                    values[theta] = [F.zero] * Hout.C.dim(p)
        return Hout.realize(m, values)


def dp_compose(C: SimplicialCategory, s: Simplex, t: Simplex) -> Simplex:
    return C.compose(s, t)
