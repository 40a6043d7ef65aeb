"""Exact coefficient rings.

Two kinds of ring are supported:

* :class:`Field` -- the rationals (elements are :class:`fractions.Fraction`)
  or a prime field F_p (elements are ints in ``range(p)``).
* :class:`SquareZeroRing` -- a finite-dimensional commutative k-algebra given
  by structure constants, with a distinguished ideal I spanned by basis
  vectors and satisfying I*I = 0.  Elements are tuples of field elements.

Every ring exposes the same small method surface (``add``, ``mul``, ``neg``,
``embed``, ``to_base``...) so category code never needs to know which one it
holds.  Elements are canonical, so plain ``==`` is exact equality.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence


class RingError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, int(p**0.5) + 1):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Q when ``p == 0``, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise RingError(f"{self.p} is not prime")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, name: str) -> "Field":
        name = name.strip()
        if name in ("Q", "QQ"):
            return cls(0)
        if name[:1] == "F" and name[1:].isdigit():
            return cls(int(name[1:]))
        raise RingError(f"unknown field {name!r} (expected Q or Fp)")

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __str__(self):
        return self.name

    # ring surface shared with SquareZeroRing
    @property
    def base(self) -> "Field":
        return self

    @property
    def dim(self) -> int:
        return 1

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def order(self) -> int:
        if not self.p:
            raise RingError("Q is infinite")
        return self.p

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def coerce(self, x):
        """Read an int, Fraction, or ``"a/b"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise RingError(f"{x} has no image in F{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        raise RingError(f"cannot read {x!r} into {self.name}")

    def embed(self, c):
        return c

    def add(self, x, y):
        return x + y if self.p == 0 else (x + y) % self.p

    def sub(self, x, y):
        return x - y if self.p == 0 else (x - y) % self.p

    def neg(self, x):
        return -x if self.p == 0 else (-x) % self.p

    def mul(self, x, y):
        return x * y if self.p == 0 else (x * y) % self.p

    def scale(self, c, x):
        return self.mul(c, x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x if self.p == 0 else pow(x, -1, self.p)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def is_zero(self, x) -> bool:
        return x == 0

    def to_base(self, x) -> tuple:
        return (x,)

    def from_base(self, v: Sequence):
        return v[0]

    def basis_element(self, i: int):
        if i != 0:
            raise IndexError(i)
        return self.one

    def elements(self) -> Iterator:
        return iter(range(self.order))

    def random(self, rng, bound: int = 3):
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def format(self, x) -> str:
        return str(x)


@dataclass(frozen=True)
class SquareZeroRing:
    """Commutative k-algebra ``B`` with basis ``labels`` and ideal I.

    ``mult[i][j]`` is the coordinate vector of ``r_i * r_j``; ``labels[0]``
    must be the unit.  ``ideal`` holds the basis indices spanning I.
    """

    base: Field
    labels: tuple
    mult: tuple
    ideal: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        m = len(self.labels)
        if len(self.mult) != m or any(len(row) != m for row in self.mult):
            raise RingError("multiplication table has the wrong shape")
        if 0 in self.ideal:
            raise RingError("the unit cannot lie in the ideal")
        object.__setattr__(
            self,
            "mult",
            tuple(tuple(tuple(self.base.coerce(c) for c in v) for v in row) for row in self.mult),
        )

    @property
    def name(self) -> str:
        if self.labels == ("1", "t") and self.ideal == frozenset({1}):
            return f"{self.base.name}[t]/(t^2)"
        return f"{self.base.name}<{','.join(self.labels)}>"

    def __str__(self):
        return self.name

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    @property
    def order(self) -> int:
        return self.base.order ** self.dim

    @property
    def zero(self) -> tuple:
        return (self.base.zero,) * self.dim

    @property
    def one(self) -> tuple:
        return self.basis_element(0)

    def basis_element(self, i: int) -> tuple:
        F = self.base
        return tuple(F.one if j == i else F.zero for j in range(self.dim))

    def coerce(self, x) -> tuple:
        if isinstance(x, (tuple, list)):
            if len(x) != self.dim:
                raise RingError(f"expected {self.dim} coordinates, got {len(x)}")
            return tuple(self.base.coerce(c) for c in x)
        return self.embed(self.base.coerce(x))

    def embed(self, c) -> tuple:
        F = self.base
        return (c,) + (F.zero,) * (self.dim - 1)

    def add(self, x, y):
        F = self.base
        return tuple(F.add(a, b) for a, b in zip(x, y))

    def sub(self, x, y):
        F = self.base
        return tuple(F.sub(a, b) for a, b in zip(x, y))

    def neg(self, x):
        F = self.base
        return tuple(F.neg(a) for a in x)

    def scale(self, c, x):
        F = self.base
        return tuple(F.mul(c, a) for a in x)

    def mul(self, x, y):
        F = self.base
        out = [F.zero] * self.dim
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = self.mult[i]
            for j, b in enumerate(y):
                if b == 0:
                    continue
                ab = F.mul(a, b)
                for l, c in enumerate(row[j]):
                    if c != 0:
                        out[l] = F.add(out[l], F.mul(ab, c))
        return tuple(out)

    def is_zero(self, x) -> bool:
        return all(c == 0 for c in x)

    def to_base(self, x) -> tuple:
        return x

    def from_base(self, v: Sequence) -> tuple:
        return tuple(v)

    def elements(self) -> Iterator[tuple]:
        return itertools.product(range(self.base.order), repeat=self.dim)

    def random(self, rng, bound: int = 3):
        return tuple(self.base.random(rng, bound) for _ in range(self.dim))

    def random_ideal(self, rng, bound: int = 3):
        F = self.base
        return tuple(F.random(rng, bound) if i in self.ideal else F.zero for i in range(self.dim))

    def format(self, x) -> str:
        out = ""
        for c, lab in zip(x, self.labels):
            if c == 0:
                continue
            s = str(c)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            term = mag if lab == "1" else (lab if mag == "1" else f"{mag}*{lab}")
            if out:
                out += f" - {term}" if neg else f" + {term}"
            else:
                out = f"-{term}" if neg else term
        return out or "0"

    # -- the ideal --------------------------------------------------------

    def in_ideal(self, x) -> bool:
        return all(c == 0 for i, c in enumerate(x) if i not in self.ideal)

    @property
    def residue_indices(self) -> tuple:
        return tuple(i for i in range(self.dim) if i not in self.ideal)

    @property
    def residue_ring(self):
        """B/I.  Returns the base field itself when I has codimension one."""
        keep = self.residue_indices
        if len(keep) == 1:
            return self.base
        mult = tuple(
            tuple(tuple(self.mult[i][j][l] for l in keep) for j in keep) for i in keep
        )
        return SquareZeroRing(self.base, tuple(self.labels[i] for i in keep), mult, frozenset())

    def reduce(self, x):
        """Image of ``x`` in B/I: drop the ideal coordinates."""
        keep = [x[i] for i in self.residue_indices]
        return keep[0] if len(keep) == 1 else tuple(keep)

    def lift(self, xbar):
        """Canonical section B/I -> B (zero ideal coordinates)."""
        keep = self.residue_indices
        coords = (xbar,) if len(keep) == 1 else tuple(xbar)
        out = [self.base.zero] * self.dim
        for i, c in zip(keep, coords):
            out[i] = c
        return tuple(out)

    def validate(self) -> "SquareZeroRing":
        """Check unit, commutativity, associativity, ideal and I^2 = 0 on basis."""
        n = self.dim
        basis = [self.basis_element(i) for i in range(n)]
        one = basis[0]
        for i, x in enumerate(basis):
            if self.mul(one, x) != x:
                raise RingError(f"{self.labels[0]} is not a unit on {self.labels[i]}")
            for j, y in enumerate(basis):
                xy = self.mul(x, y)
                if xy != self.mul(y, x):
                    raise RingError(f"not commutative on ({self.labels[i]}, {self.labels[j]})")
                if i in self.ideal and not self.in_ideal(xy):
                    raise RingError(f"ideal not closed: {self.labels[i]}*{self.labels[j]}")
                if i in self.ideal and j in self.ideal and not self.is_zero(xy):
                    raise RingError(f"ideal does not square to zero: {self.labels[i]}*{self.labels[j]}")
                for l, z in enumerate(basis):
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)):
                        raise RingError(
                            f"not associative on ({self.labels[i]}, {self.labels[j]}, {self.labels[l]})"
                        )
        return self


def make_dual_numbers(k: Field) -> SquareZeroRing:
    """k[t]/(t^2) with I = (t)."""
    z, o = 0, 1
    mult = (((o, z), (z, o)), ((z, o), (z, z)))
    return SquareZeroRing(k, ("1", "t"), mult, frozenset({1}))


def make_truncated_polynomials(k: Field, n: int) -> SquareZeroRing:
    """k[t]/(t^n) with I spanned by t^j for 2j >= n, the largest square-zero
    monomial ideal."""
    if n < 2:
        raise RingError("need n >= 2")
    labels = ("1",) + tuple("t" if j == 1 else f"t^{j}" for j in range(1, n))
    mult = tuple(
        tuple(tuple(1 if (l == i + j) else 0 for l in range(n)) for j in range(n)) for i in range(n)
    )
    ideal = frozenset(j for j in range(1, n) if 2 * j >= n)
    return SquareZeroRing(k, labels, mult, ideal)


def reduce_mod_ideal(x, B: SquareZeroRing):
    return B.reduce(x)


def lift_section(xbar, B: SquareZeroRing):
    return B.lift(xbar)


def parse_ring(spec: dict):
    """Build a ring from its file description.

    ``{"field": "F5"}``, ``{"field": "Q", "dual_numbers": true}`` or a full
    structure-constant presentation ``{"field", "basis", "mult", "ideal"}``
    where ``mult`` lists sparse ``[i, j, l, coef]`` entries.
    """
    allowed = {"field", "dual_numbers", "basis", "mult", "ideal"}
    unknown = set(spec) - allowed
    if unknown:
        raise RingError(f"unknown ring keys: {sorted(unknown)}")
    k = Field.parse(spec.get("field", "Q"))
    if "basis" not in spec:
        if spec.get("dual_numbers"):
            return make_dual_numbers(k)
        return k
    labels = tuple(spec["basis"])
    n = len(labels)
    mult = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i, j, l, c in spec.get("mult", []):
        mult[i][j][l] = c
    ideal = frozenset(labels.index(s) for s in spec.get("ideal", []))
    return SquareZeroRing(k, labels, tuple(tuple(tuple(v) for v in row) for row in mult), ideal).validate()


def ring_spec(R) -> dict:
    if isinstance(R, Field):
        return {"field": R.name}
    if R.name.endswith("[t]/(t^2)"):
        return {"field": R.base.name, "dual_numbers": True}
    entries = [
        [i, j, l, R.base.format(c)]
        for i, row in enumerate(R.mult)
        for j, v in enumerate(row)
        for l, c in enumerate(v)
        if c != 0
    ]
    return {
        "field": R.base.name,
        "basis": list(R.labels),
        "mult": entries,
        "ideal": [R.labels[i] for i in sorted(R.ideal)],
    }
