import random

import pytest

from dgmc.complexes import endo_category
from dgmc.dgcat import AxiomError, DGCategory, base_change, validate_category
from dgmc.scalars import Field, make_dual_numbers

Q, F5 = Field.rationals(), Field.prime(5)


def test_endo_111_validates():
    validate_category(endo_category((1, 1, 1)))


def test_compose_elementary_maps():
    P = endo_category((1, 1, 1))
    E = "E111"
    e1, e2 = P.basis_elements(E, E, 1)
    f1 = P.basis(E, E, 2, 0)
    assert e2 @ e1 == f1
    assert (e1 @ e2).is_zero()
    a = P.element(E, E, 0, [2, 3, 5])
    assert P.identity(E) @ a == a == a @ P.identity(E)


def test_compose_bilinear():
    rng = random.Random(1)
    P = endo_category([(1, 2, 1), (2, 1)], F5)
    for _ in range(30):
        E, F, G = (rng.choice(P.objects) for _ in range(3))
        i, j = rng.choice(P.degrees(E, F)), rng.choice(P.degrees(F, G))

        def rnd(X, Y, d):
            return P.element(X, Y, d, [rng.randrange(5) for _ in range(P.dim(X, Y, d))])

        a, a2, b = rnd(E, F, i), rnd(E, F, i), rnd(F, G, j)
        assert b @ (2 * a + a2) == 2 * (b @ a) + b @ a2


def test_diff_vanishes_on_examples():
    P = endo_category([(1, 1, 1), (1, 2, 1)])
    for E in P.objects:
        for F in P.objects:
            for i in P.degrees(E, F):
                for a in P.basis_elements(E, F, i):
                    assert a.d().is_zero()
        assert P.identity(E).d().is_zero()


def one_object(dims, d, ident, comps=None, bound=2):
    return DGCategory(Q, ["X"], {("X", "X"): dims}, {("X", "X"): d}, comps or {}, {"X": ident}, bound)


def test_rejects_d_squared():
    # P^0 = P^1 = P^2 = k, both differentials the identity
    comps = {("X", "X", "X"): {(0, 0): {(0, 0): {0: 1}}, (1, 0): {(0, 0): {0: 1}}, (0, 1): {(0, 0): {0: 1}},
                               (2, 0): {(0, 0): {0: 1}}, (0, 2): {(0, 0): {0: 1}}}}
    P = one_object({0: 1, 1: 1, 2: 1}, {0: [{0: 1}], 1: [{0: 1}]}, (1,), comps)
    with pytest.raises(AxiomError) as e:
        validate_category(P)
    assert e.value.axiom == "d^2 = 0"


def test_rejects_scaled_identity():
    P = endo_category((1, 1))
    bad = DGCategory(Q, P.objects, P.dims, P.d, P.comp, {"E11": (2, 2)}, P.bound)
    with pytest.raises(AxiomError) as e:
        validate_category(bad)
    assert e.value.axiom == "unit"


def test_rejects_unbounded_below():
    P = endo_category((1, 1, 1))
    low = DGCategory(Q, P.objects, P.dims, P.d, P.comp, P.identities, 1)
    with pytest.raises(AxiomError) as e:
        validate_category(low)
    assert e.value.axiom == "unbounded below"


def test_rejects_broken_leibniz():
    # a differential on P^-1 alone, sending the one map E^1 -> E^0 to a unit
    # matrix, is not a derivation of matrix composition
    P = endo_category((1, 1))
    E = "E11"
    d = {(E, E): {-1: [{0: 1, 1: 0}]}}
    bad = DGCategory(Q, P.objects, P.dims, d, P.comp, P.identities, P.bound)
    with pytest.raises(AxiomError) as e:
        validate_category(bad)
    assert e.value.axiom in ("Leibniz", "d^2 = 0", "d(1) = 0")


def test_base_change_dual_numbers():
    P = endo_category((1, 1, 1))
    B = make_dual_numbers(Q)
    PB = base_change(P, B)
    assert PB.dim("E111", "E111", 1) == 2
    assert base_change(P, Q) is P
    validate_category(base_change(endo_category((1, 1, 1)), make_dual_numbers(F5)))


def test_element_arithmetic_and_repr():
    P = endo_category((1, 1))
    a = P.element("E11", "E11", 0, [1, 2])
    assert (a - a).is_zero()
    assert -a + a == P.zero("E11", "E11", 0)
    assert "E11->E11 deg 0" in repr(a)
    with pytest.raises(ValueError):
        P.element("E11", "E11", 0, [1])
