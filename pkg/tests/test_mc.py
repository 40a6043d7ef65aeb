import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgmc.complexes import endo_category, random_complex
from dgmc.dgcat import validate_category
from dgmc.mc import (MCObject, NotMaurerCartan, TwistedComplex, bianchi_defect, curvature, h0_inverse,
                     is_mc, mc_category, mc_object, solve_coboundary, twisted_diff)
from dgmc.scalars import Field

Q, F5 = Field.rationals(), Field.prime(5)
E = "E111"


@pytest.fixture
def P():
    return endo_category((1, 1, 1))


def test_curvature_examples(P):
    assert curvature(P.zero(E, E, 1)).is_zero()
    assert curvature(P.element(E, E, 1, [1, 0])).is_zero()
    assert curvature(P.element(E, E, 1, [1, 1])) == P.basis(E, E, 2, 0)
    assert is_mc(P.element(E, E, 1, [0, 0]))
    assert not is_mc(P.element(E, E, 1, [1, 1]))
    with pytest.raises(ValueError):
        curvature(P.zero(E, E, 0))


def test_twisted_diff_examples(P):
    eta = P.element(E, E, 1, [1, 0])
    a = P.element(E, E, 0, [5, 2, 7])
    assert twisted_diff(eta, eta, a).coeffs == (3, 0)
    zero = P.zero(E, E, 1)
    for i in P.degrees(E, E):
        for b in P.basis_elements(E, E, i):
            assert twisted_diff(zero, zero, b) == b.d()
    one = P.identity(E)
    assert twisted_diff(eta, eta, one) == eta @ one - one @ eta


def test_twisted_diff_object_mismatch():
    P = endo_category([(1, 1, 1), (1, 1)])
    eta = P.zero("E111", "E111", 1)
    a = P.zero("E11", "E11", 0)
    with pytest.raises(ValueError):
        twisted_diff(eta, eta, a)


def test_mc_category_zero_twist_is_subcategory(P):
    A = mc_category(P, [MCObject(E, P.zero(E, E, 1), "X")])
    assert A.dims[("X", "X")] == P.dims[(E, E)]
    for i in A.degrees("X", "X"):
        for b in A.basis_elements("X", "X", i):
            assert b.d().is_zero()


def test_mc_category_cocycles(P):
    A = mc_category(P, [mc_object(P, E, [1, 0], "X")])
    # Z^0 is {a0 = a1, a2 free}
    assert A.element("X", "X", 0, [1, 1, 0]).d().is_zero()
    assert A.element("X", "X", 0, [0, 0, 1]).d().is_zero()
    assert not A.element("X", "X", 0, [1, 0, 0]).d().is_zero()
    with pytest.raises(NotMaurerCartan):
        mc_object(P, E, [1, 1])


def test_mc_category_validates_on_random_points():
    rng = random.Random(11)
    P = endo_category((1, 1, 1, 1), F5)
    X = P.objects[0]
    objs = [MCObject(X, P.element(X, X, 1, random_complex((1, 1, 1, 1), F5, rng)), f"M{n}") for n in range(20)]
    for n in range(0, 20, 2):
        validate_category(mc_category(P, objs[n:n + 2]))


def test_bianchi_examples():
    P = endo_category((1, 1, 1, 1))
    X = "E1111"
    zeta = P.element(X, X, 1, [1, 1, 1])
    assert curvature(zeta).coeffs == (1, 1)
    assert bianchi_defect(zeta).is_zero()
    assert bianchi_defect(P.zero(X, X, 1)).is_zero()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_bianchi_property(cs):
    P = endo_category((1, 2, 1, 1))
    X = P.objects[0]
    zeta = P.element(X, X, 1, [Fraction(c, 2) for c in cs])
    assert bianchi_defect(zeta).is_zero()


def test_solve_coboundary(P):
    eta = P.element(E, E, 1, [1, 0])
    T = TwistedComplex(MCObject(E, eta), MCObject(E, eta))
    assert solve_coboundary(T, P.zero(E, E, 0)) is not None
    rng = random.Random(3)
    for _ in range(10):
        g0 = P.element(E, E, -1, [rng.randint(-3, 3) for _ in range(2)])
        target = T.d(g0)
        g = solve_coboundary(T, target)
        assert T.d(g) == target
    # the identity is a cocycle but not a coboundary
    assert solve_coboundary(T, P.identity(E)) is None


def test_h0_inverse(P):
    X = MCObject(E, P.element(E, E, 1, [1, 0]))
    one = P.identity(E)
    b, g, h = h0_inverse(one, X, X)
    assert b @ one - one == TwistedComplex(X, X).d(g)
    b, g, h = h0_inverse(2 * one, X, X)
    assert b == Fraction(1, 2) * one
    assert h0_inverse(P.zero(E, E, 0), X, X) is None
    with pytest.raises(ValueError):
        h0_inverse(P.element(E, E, 0, [1, 0, 0]), X, X)
