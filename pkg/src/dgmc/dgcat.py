"""Finite dg-categories presented by structure constants.

A :class:`DGCategory` stores, for every ordered pair of objects, the
dimensions of the graded hom spaces P^i(E, F) (absent degrees are zero), the
differential as sparse column images, sparse composition tensors and the
identity vectors.  Composition constants and identities are scalars of the
base field k; differential entries are ring elements, so twisted categories
over a coefficient ring fit the same container.

Elements are dense coefficient tuples over the category's ring and support
``+``, ``-``, scalar ``*`` and ``@`` for composition (``b @ a`` is b after a).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .scalars import Field


class AxiomError(ValueError):
    """A dg-category axiom failed on a specific basis tuple."""

    def __init__(self, axiom: str, witness, detail: str = ""):
        self.axiom = axiom
        self.witness = witness
        self.detail = detail
        msg = f"{axiom} fails at {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DGCategory:
    def __init__(self, ring, objects, dims, differentials, compositions, identities, bound=1):
        self.ring = ring
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object labels")
        self.bound = bound
        self.dims = {}
        for pair, by_deg in dims.items():
            kept = {int(i): int(n) for i, n in by_deg.items() if n}
            if kept:
                self.dims[pair] = kept
        R = ring
        self.d = {}
        for pair, by_deg in differentials.items():
            for i, cols in by_deg.items():
                cleaned = [
                    {r: c for r, c in col.items() if not R.is_zero(c)} for col in cols
                ]
                if any(cleaned):
                    self.d.setdefault(pair, {})[int(i)] = cleaned
        self.comp = {}
        for triple, by_deg in compositions.items():
            for degs, table in by_deg.items():
                cleaned = {}
                for ba, out in table.items():
                    out = {c: k for c, k in out.items() if k != 0}
                    if out:
                        cleaned[ba] = out
                if cleaned:
                    self.comp.setdefault(triple, {})[degs] = cleaned
        self.identities = {E: tuple(v) for E, v in identities.items()}

    def __repr__(self):
        return f"DGCategory({list(self.objects)}, ring={self.ring})"

    @property
    def base_field(self) -> Field:
        return self.ring.base

    def dim(self, E, F, i: int) -> int:
        return self.dims.get((E, F), {}).get(i, 0)

    def degrees(self, E, F) -> list[int]:
        return sorted(self.dims.get((E, F), {}))

    # -- elements ---------------------------------------------------------

    def element(self, E, F, i: int, coeffs) -> "Element":
        R = self.ring
        coeffs = tuple(R.coerce(c) for c in coeffs)
        if len(coeffs) != self.dim(E, F, i):
            raise ValueError(
                f"P^{i}({E},{F}) has dimension {self.dim(E, F, i)}, got {len(coeffs)} coefficients"
            )
        return Element(self, E, F, i, coeffs)

    def zero(self, E, F, i: int) -> "Element":
        return Element(self, E, F, i, (self.ring.zero,) * self.dim(E, F, i))

    def basis(self, E, F, i: int, j: int, scalar=None) -> "Element":
        R = self.ring
        c = R.one if scalar is None else scalar
        n = self.dim(E, F, i)
        return Element(self, E, F, i, tuple(c if t == j else R.zero for t in range(n)))

    def basis_elements(self, E, F, i: int) -> list["Element"]:
        return [self.basis(E, F, i, j) for j in range(self.dim(E, F, i))]

    def identity(self, E) -> "Element":
        R = self.ring
        v = self.identities.get(E, ())
        return Element(self, E, E, 0, tuple(R.embed(c) for c in v))

    # -- structure maps ---------------------------------------------------

    def diff(self, a: "Element") -> "Element":
        R = self.ring
        E, F, i = a.source, a.target, a.degree
        n = self.dim(E, F, i + 1)
        out = [R.zero] * n
        cols = self.d.get((E, F), {}).get(i)
        if cols:
            for c, x in enumerate(a.coeffs):
                if R.is_zero(x):
                    continue
                for r, m in cols[c].items():
                    out[r] = R.add(out[r], R.mul(m, x))
        return Element(self, E, F, i + 1, tuple(out))

    def compose(self, b: "Element", a: "Element") -> "Element":
        """b . a for a: E -> F of degree i and b: F -> G of degree j."""
        if a.target != b.source:
            raise ValueError(f"cannot compose {b.source}->{b.target} after {a.source}->{a.target}")
        if a.cat.ring != b.cat.ring:
            raise ValueError("ring mismatch")
        R = self.ring
        E, F, G = a.source, a.target, b.target
        i, j = a.degree, b.degree
        n = self.dim(E, G, i + j)
        out = [R.zero] * n
        table = self.comp.get((E, F, G), {}).get((j, i))
        if table:
            bc, ac = b.coeffs, a.coeffs
            for (p, q), terms in table.items():
                x, y = bc[p], ac[q]
                if R.is_zero(x) or R.is_zero(y):
                    continue
                xy = R.mul(x, y)
                for c, k in terms.items():
                    out[c] = R.add(out[c], R.scale(k, xy))
        return Element(self, E, G, i + j, tuple(out))

    def flatten(self, a: "Element") -> list:
        """k-coordinates of ``a`` (ring coordinates of each hom coefficient)."""
        out = []
        for x in a.coeffs:
            out.extend(self.ring.to_base(x))
        return out

    def unflatten(self, E, F, i: int, v) -> "Element":
        R = self.ring
        m = R.dim
        n = self.dim(E, F, i)
        return Element(self, E, F, i, tuple(R.from_base(v[t * m:(t + 1) * m]) for t in range(n)))

    def flat_basis(self, E, F, i: int, ring_indices=None) -> list["Element"]:
        """k-basis of P^i(E,F) (x) R, optionally restricted to some ring basis
        indices (for instance the ideal)."""
        R = self.ring
        idx = range(R.dim) if ring_indices is None else ring_indices
        out = []
        for j in range(self.dim(E, F, i)):
            for r in idx:
                out.append(self.basis(E, F, i, j, R.basis_element(r)))
        return out

    @cached_property
    def signature(self):
        return (self.objects, tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.dims.items())))


@dataclass(frozen=True, eq=False)
class Element:
    cat: DGCategory
    source: object
    target: object
    degree: int
    coeffs: tuple

    def _check(self, other: "Element"):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ValueError(
                f"incompatible elements: {self.source}->{self.target} deg {self.degree} vs "
                f"{other.source}->{other.target} deg {other.degree}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        R = self.cat.ring
        return Element(self.cat, self.source, self.target, self.degree,
                       tuple(R.add(x, y) for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        R = self.cat.ring
        return Element(self.cat, self.source, self.target, self.degree,
                       tuple(R.sub(x, y) for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Element":
        R = self.cat.ring
        return Element(self.cat, self.source, self.target, self.degree,
                       tuple(R.neg(x) for x in self.coeffs))

    def __rmul__(self, c) -> "Element":
        R = self.cat.ring
        c = R.coerce(c) if not isinstance(c, tuple) else c
        return Element(self.cat, self.source, self.target, self.degree,
                       tuple(R.mul(c, x) for x in self.coeffs))

    def __matmul__(self, other: "Element") -> "Element":
        return self.cat.compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (
            self.cat.ring == other.cat.ring
            and (self.source, self.target, self.degree, self.coeffs)
            == (other.source, other.target, other.degree, other.coeffs)
        )

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.coeffs))

    def is_zero(self) -> bool:
        R = self.cat.ring
        return all(R.is_zero(x) for x in self.coeffs)

    def d(self) -> "Element":
        return self.cat.diff(self)

    def __repr__(self):
        R = self.cat.ring
        body = ", ".join(R.format(x) for x in self.coeffs)
        return f"<{self.source}->{self.target} deg {self.degree}: ({body})>"


def diff(a: Element) -> Element:
    return a.cat.diff(a)


def compose(b: Element, a: Element) -> Element:
    return a.cat.compose(b, a)


def validate_category(cat: DGCategory) -> DGCategory:
    """Check every axiom exhaustively on bases; raise :class:`AxiomError` on
    the first failure, return ``cat`` otherwise."""
    objs = cat.objects
    if cat.bound < 1:
        raise AxiomError("vanishing bound", cat.bound, "n must be >= 1")
    for (E, F), by_deg in cat.dims.items():
        if E not in objs or F not in objs:
            raise AxiomError("objects", (E, F), "hom between undeclared objects")
        low = min(by_deg)
        if low < -cat.bound:
            raise AxiomError("unbounded below", (E, F, low), f"P^{low} != 0 below -{cat.bound}")

    for E, F in product(objs, repeat=2):
        for i in cat.degrees(E, F):
            for j, a in enumerate(cat.basis_elements(E, F, i)):
                if not a.d().d().is_zero():
                    raise AxiomError("d^2 = 0", (E, F, i, j))

    for E in objs:
        one = cat.identity(E)
        if len(cat.identities.get(E, ())) != cat.dim(E, E, 0):
            raise AxiomError("unit", (E,), "identity vector has the wrong length")
        if not one.d().is_zero():
            raise AxiomError("d(1) = 0", (E,))
    for E, F in product(objs, repeat=2):
        one_E, one_F = cat.identity(E), cat.identity(F)
        for i in cat.degrees(E, F):
            for j, a in enumerate(cat.basis_elements(E, F, i)):
                if one_F @ a != a:
                    raise AxiomError("unit", (F, E, F, i, j), "1_F . a != a")
                if a @ one_E != a:
                    raise AxiomError("unit", (E, E, F, i, j), "a . 1_E != a")

    for E, F, G in product(objs, repeat=3):
        for i in cat.degrees(E, F):
            A = cat.basis_elements(E, F, i)
            dA = [a.d() for a in A]
            for j in cat.degrees(F, G):
                sign = 1 if j % 2 == 0 else -1
                for q, b in enumerate(cat.basis_elements(F, G, j)):
                    db = b.d()
                    for p, a in enumerate(A):
                        lhs = (b @ a).d()
                        rhs = db @ a + sign * (b @ dA[p])
                        if lhs != rhs:
                            raise AxiomError("Leibniz", (E, F, G, j, q, i, p))

    for E, F, G, H in product(objs, repeat=4):
        for i in cat.degrees(E, F):
            A = cat.basis_elements(E, F, i)
            for j in cat.degrees(F, G):
                Bs = cat.basis_elements(F, G, j)
                BA = [[b @ a for a in A] for b in Bs]
                for k in cat.degrees(G, H):
                    for r, c in enumerate(cat.basis_elements(G, H, k)):
                        CB = [c @ b for b in Bs]
                        for q in range(len(Bs)):
                            for p, a in enumerate(A):
                                if c @ BA[q][p] != CB[q] @ a:
                                    raise AxiomError("associativity", (E, F, G, H, k, r, j, q, i, p))
    return cat


def base_change(P: DGCategory, R) -> DGCategory:
    """P (x)_k R.  Constants of P are read into R (a Field of the same or
    prime characteristic, or a ring over such a field)."""
    if P.ring == R:
        return P
    if not isinstance(P.ring, Field):
        raise ValueError("base change starts from a category over a field")
    k = R.base

    def scalar(c):
        return k.coerce(c)

    diffs = {
        pair: {i: [{r: R.embed(scalar(m)) for r, m in col.items()} for col in cols] for i, cols in by.items()}
        for pair, by in P.d.items()
    }
    comps = {
        t: {degs: {ba: {c: scalar(m) for c, m in out.items()} for ba, out in table.items()}
            for degs, table in by.items()}
        for t, by in P.comp.items()
    }
    ids = {E: tuple(scalar(c) for c in v) for E, v in P.identities.items()}
    return DGCategory(R, P.objects, P.dims, diffs, comps, ids, P.bound)


def coerce_element(a: Element, cat: DGCategory) -> Element:
    """Re-read an element of P in a base change of P."""
    R = cat.ring
    src = a.cat.ring
    if isinstance(src, Field):
        coeffs = tuple(R.embed(R.base.coerce(x)) for x in a.coeffs)
    else:
        coeffs = tuple(R.coerce(x) for x in a.coeffs)
    return cat.element(a.source, a.target, a.degree, coeffs) if coeffs else cat.zero(a.source, a.target, a.degree)
