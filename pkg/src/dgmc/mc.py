"""Maurer-Cartan elements, twisted differentials and the category MC(P).

Sign convention, used everywhere: for a: E -> F of degree i, with degree-one
elements eta on E and zeta on F,

    d_{eta,zeta}(a) = d(a) + zeta . a - (-1)^i a . eta.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import linalg
from .dgcat import DGCategory, Element


class NotMaurerCartan(ValueError):
    pass


def curvature(eta: Element) -> Element:
    """d(eta) + eta . eta."""
    if eta.degree != 1:
        raise ValueError(f"curvature needs a degree-1 element, got degree {eta.degree}")
    if eta.source != eta.target:
        raise ValueError("curvature needs an endomorphism")
    return eta.d() + eta @ eta


def is_mc(eta: Element) -> bool:
    return curvature(eta).is_zero()


def twisted_diff(eta: Element, zeta: Element, a: Element) -> Element:
    """d_{eta,zeta}(a) for a from eta's object to zeta's object."""
    if eta.source != a.source or zeta.source != a.target:
        raise ValueError(
            f"twist mismatch: a is {a.source}->{a.target}, twists on {eta.source} and {zeta.source}"
        )
    out = a.d() + zeta @ a
    if a.degree % 2 == 0:
        return out - a @ eta
    return out + a @ eta


def bianchi_defect(zeta: Element) -> Element:
    """d_{zeta,zeta}(curvature(zeta)); identically zero for every zeta."""
    return twisted_diff(zeta, zeta, curvature(zeta))


@dataclass(frozen=True)
class MCObject:
    obj: object
    eta: Element
    label: object = None

    @property
    def name(self):
        return self.label if self.label is not None else self.obj


@dataclass(frozen=True)
class TwistedComplex:
    """The hom complex (P(E, F), d_{eta,zeta}) between two MC objects."""

    source: MCObject
    target: MCObject

    @property
    def cat(self) -> DGCategory:
        return self.source.eta.cat

    def d(self, a: Element) -> Element:
        return twisted_diff(self.source.eta, self.target.eta, a)

    def degrees(self):
        return self.cat.degrees(self.source.obj, self.target.obj)

    def check_square_zero(self) -> bool:
        E, F = self.source.obj, self.target.obj
        for i in self.degrees():
            for a in self.cat.basis_elements(E, F, i):
                if not self.d(self.d(a)).is_zero():
                    return False
        return True


def mc_object(P: DGCategory, E, coeffs, label=None) -> MCObject:
    eta = P.element(E, E, 1, coeffs)
    if not is_mc(eta):
        raise NotMaurerCartan(f"{eta} has curvature {curvature(eta)}")
    return MCObject(E, eta, label)


def mc_category(P: DGCategory, objects) -> DGCategory:
    """The dg-category whose objects are the given MC objects, with twisted
    differentials and the composition and identities of P."""
    objects = list(objects)
    labels = []
    for n, X in enumerate(objects):
        if not is_mc(X.eta):
            raise NotMaurerCartan(f"object {n} ({X.obj}) is not Maurer-Cartan")
        labels.append(X.label if X.label is not None else f"{X.obj}#{n}")
    if len(set(labels)) != len(labels):
        raise ValueError("MC object labels must be distinct")
    R = P.ring
    dims, diffs, comps, ids = {}, {}, {}, {}
    for (lx, X), (ly, Y) in product(zip(labels, objects), repeat=2):
        dims[(lx, ly)] = dict(P.dims.get((X.obj, Y.obj), {}))
        by = {}
        for i in P.degrees(X.obj, Y.obj):
            cols = []
            for a in P.basis_elements(X.obj, Y.obj, i):
                img = twisted_diff(X.eta, Y.eta, a)
                cols.append({r: c for r, c in enumerate(img.coeffs) if not R.is_zero(c)})
            by[i] = cols
        diffs[(lx, ly)] = by
    for (lx, X), (ly, Y), (lz, Z) in product(zip(labels, objects), repeat=3):
        table = P.comp.get((X.obj, Y.obj, Z.obj))
        if table:
            comps[(lx, ly, lz)] = table
    for lx, X in zip(labels, objects):
        ids[lx] = P.identities.get(X.obj, ())
    return DGCategory(R, labels, dims, diffs, comps, ids, P.bound)


# -- exact linear solves over the flattened k-structure ---------------------


def solve_linear(unknowns, equations, rhs, ring_indices=None):
    """Solve a linear system whose unknowns are hom elements.

    ``unknowns`` is a list of ``(cat, E, F, degree)`` spaces, ``equations``
    a function taking one Element per unknown and returning a list of
    Elements, and ``rhs`` the target list of Elements.  The map must be
    k-linear.  Unknowns range over P^i(E,F) (x) R, or over its part with ring
    coordinates in ``ring_indices`` (e.g. the square-zero ideal).  Returns a
    list of Elements or None.
    """
    spaces = []
    for cat, E, F, i in unknowns:
        spaces.append((cat, E, F, i, cat.flat_basis(E, F, i, ring_indices)))
    zeros = [cat.zero(E, F, i) for cat, E, F, i, _ in spaces]
    k = rhs[0].cat.base_field

    def flat(elems):
        out = []
        for e in elems:
            out.extend(e.cat.flatten(e))
        return out

    columns = []
    for n, (_, _, _, _, basis) in enumerate(spaces):
        for b in basis:
            args = list(zeros)
            args[n] = b
            columns.append(flat(equations(*args)))
    target = flat(rhs)
    nrows = len(target)
    ncols = len(columns)
    if ncols == 0:
        return zeros if all(x == 0 for x in target) else None
    rows = [[columns[c][r] for c in range(ncols)] for r in range(nrows)]
    x = linalg.solve(rows, target, k, ncols)
    if x is None:
        return None
    out = []
    pos = 0
    for (cat, E, F, i, basis), z in zip(spaces, zeros):
        acc = z
        for b in basis:
            c = x[pos]
            pos += 1
            if c != 0:
                acc = acc + c * b
        out.append(acc)
    return out


def solve_coboundary(T: TwistedComplex, target: Element):
    """Some g with d_{eta,zeta}(g) = target, or None if target is not exact."""
    E, F = T.source.obj, T.target.obj
    sol = solve_linear([(T.cat, E, F, target.degree - 1)], lambda g: [T.d(g)], [target])
    return None if sol is None else sol[0]


def h0_inverse(f: Element, source: MCObject, target: MCObject):
    """Witness that the closed degree-0 f: source -> target is invertible in H^0.

    Returns ``(b, g, h)`` with b closed, ``b.f - 1 = d(g)`` and
    ``f.b - 1 = d(h)``, or None when no inverse exists.
    """
    fwd = TwistedComplex(source, target)
    if f.degree != 0:
        raise ValueError("h0_inverse needs a degree-0 element")
    if not fwd.d(f).is_zero():
        raise ValueError("h0_inverse needs a closed element")
    back = TwistedComplex(target, source)
    endE = TwistedComplex(source, source)
    endF = TwistedComplex(target, target)
    cat = f.cat
    E, F = source.obj, target.obj

    def eqs(b, g, h):
        return [back.d(b), b @ f - endE.d(g), f @ b - endF.d(h)]

    rhs = [cat.zero(F, E, 1), cat.identity(E), cat.identity(F)]
    sol = solve_linear([(cat, F, E, 0), (cat, E, E, -1), (cat, F, F, -1)], eqs, rhs)
    if sol is None:
        return None
    return tuple(sol)
