"""The affine scheme V_E of Maurer-Cartan elements on one object.

With bases e^1..e^r of P^1(E,E) and f^1..f^s of P^2(E,E), the curvature of
eta = sum z_i e^i is sum_l c_l(z) f^l where

    c_l = sum_i b^i_l x_i + sum_{i,j} a^{ij}_l x_i x_j,

``e^i e^j = sum_l a^{ij}_l f^l`` and ``d e^i = sum_l b^i_l f^l``.  Quadratic
terms keep the ordered pair (i, j): composition is not commutative and
evaluation must match eta . eta exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .dgcat import DGCategory
from .scalars import Field


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with no constant term: ``linear[i]`` is the
    coefficient of x_i, ``quadratic[(i, j)]`` that of x_i x_j (0-based)."""

    linear: dict = field(default_factory=dict)
    quadratic: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "linear", {i: c for i, c in sorted(self.linear.items()) if c != 0})
        object.__setattr__(self, "quadratic", {ij: c for ij, c in sorted(self.quadratic.items()) if c != 0})

    def __hash__(self):
        return hash((tuple(self.linear.items()), tuple(self.quadratic.items())))

    def terms(self):
        """(index tuple, coefficient) pairs in lexicographic order."""
        items = [((i,), c) for i, c in self.linear.items()]
        items += list(self.quadratic.items())
        return sorted(items, key=lambda t: t[0])

    def evaluate(self, z, R):
        acc = R.zero
        for i, c in self.linear.items():
            acc = R.add(acc, R.scale(c, z[i]))
        for (i, j), c in self.quadratic.items():
            acc = R.add(acc, R.scale(c, R.mul(z[i], z[j])))
        return acc

    def format(self) -> str:
        out = ""
        for idx, c in self.terms():
            mono = "*".join(f"x_{i + 1}" for i in idx)
            s = str(c)
            if s.startswith("-"):
                out += f" - {s[1:]}*{mono}" if out else f"-{s[1:]}*{mono}"
            else:
                out += f" + {s}*{mono}" if out else f"{s}*{mono}"
        return out or "0"


@dataclass(frozen=True)
class CurvatureIdeal:
    obj: object
    r: int
    generators: tuple
    field: Field = field(default_factory=Field.rationals)

    @property
    def s(self) -> int:
        return len(self.generators)

    def same_as(self, other: "CurvatureIdeal") -> bool:
        """Generator-by-generator equality (the object label is ignored)."""
        return self.r == other.r and self.field == other.field and self.generators == other.generators

    def over(self, k: Field) -> "CurvatureIdeal":
        """Re-read the coefficients in another field (e.g. Q -> F_p)."""
        if k == self.field:
            return self
        gens = tuple(
            Polynomial({i: k.coerce(c) for i, c in g.linear.items()},
                       {ij: k.coerce(c) for ij, c in g.quadratic.items()})
            for g in self.generators
        )
        return CurvatureIdeal(self.obj, self.r, gens, k)

    def emit(self) -> str:
        lines = [
            "# curvature ideal",
            f"object: {self.obj}",
            f"field: {self.field.name}",
            f"r: {self.r}",
            f"s: {self.s}",
        ]
        lines += [f"c_{l + 1} = {g.format()}" for l, g in enumerate(self.generators)]
        return "\n".join(lines) + "\n"


def _require_field(P: DGCategory):
    if not isinstance(P.ring, Field):
        raise ValueError("the curvature ideal is defined for categories over a field")


def extract_structure_constants(P: DGCategory, E):
    """Return ``(a, b)`` with ``a[(i, j, l)] = a^{ij}_l`` and
    ``b[(i, l)] = b^i_l`` (0-based, zero entries omitted)."""
    _require_field(P)
    r = P.dim(E, E, 1)
    basis = P.basis_elements(E, E, 1)
    a, b = {}, {}
    for i in range(r):
        for l, c in enumerate(basis[i].d().coeffs):
            if c != 0:
                b[(i, l)] = c
        for j in range(r):
            for l, c in enumerate((basis[i] @ basis[j]).coeffs):
                if c != 0:
                    a[(i, j, l)] = c
    return a, b


def curvature_ideal(P: DGCategory, E) -> CurvatureIdeal:
    a, b = extract_structure_constants(P, E)
    s = P.dim(E, E, 2)
    lin = [{} for _ in range(s)]
    quad = [{} for _ in range(s)]
    for (i, l), c in b.items():
        lin[l][i] = c
    for (i, j, l), c in a.items():
        quad[l][(i, j)] = c
    gens = tuple(Polynomial(lin[l], quad[l]) for l in range(s))
    return CurvatureIdeal(E, P.dim(E, E, 1), gens, P.ring)


def evaluate_ideal(ideal: CurvatureIdeal, z, R=None) -> list:
    """Values c_l(z) for z in R^r (R defaults to the ideal's field)."""
    R = ideal.field if R is None else R
    ideal = ideal.over(R.base)
    if len(z) != ideal.r:
        raise ValueError(f"expected a point with {ideal.r} coordinates, got {len(z)}")
    z = [R.coerce(x) for x in z]
    return [g.evaluate(z, R) for g in ideal.generators]


def is_point(ideal: CurvatureIdeal, z, R=None) -> bool:
    R = ideal.field if R is None else R
    return all(R.is_zero(v) for v in evaluate_ideal(ideal, z, R))


def enumerate_points(ideal: CurvatureIdeal, R, limit: int = 2_000_000) -> list[tuple]:
    """All points of V_E over a finite ring R, by exhaustive scan."""
    if not R.is_finite:
        raise ValueError(f"{R} is infinite; enumeration needs a finite ring")
    size = R.order ** ideal.r
    if size > limit:
        raise SearchSpaceTooLarge(f"{R.order}^{ideal.r} = {size} candidates exceeds limit {limit}")
    elems = list(R.elements())
    gens = ideal.over(R.base).generators
    out = []
    for z in itertools.product(elems, repeat=ideal.r):
        if all(R.is_zero(g.evaluate(z, R)) for g in gens):
            out.append(z)
    return out


def count_points(ideal: CurvatureIdeal, R, limit: int = 2_000_000) -> int:
    return len(enumerate_points(ideal, R, limit))
