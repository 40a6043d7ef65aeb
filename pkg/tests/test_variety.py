import itertools
import random

import pytest

from dgmc.complexes import endo_category
from dgmc.dgcat import base_change
from dgmc.mc import curvature
from dgmc.scalars import Field, make_dual_numbers
from dgmc.variety import (SearchSpaceTooLarge, count_points, curvature_ideal, enumerate_points, evaluate_ideal,
                          extract_structure_constants, is_point)

Q, F2, F5 = Field.rationals(), Field.prime(2), Field.prime(5)


def test_structure_constants_111():
    a, b = extract_structure_constants(endo_category((1, 1, 1)), "E111")
    # e^2 . e^1 = f^1 is the only nonzero product
    assert a == {(1, 0, 0): 1}
    assert b == {}


def test_structure_constants_empty_without_p2():
    a, b = extract_structure_constants(endo_category((1, 1)), "E11")
    assert a == {} and b == {}


def test_structure_constants_functorial():
    P = endo_category((1, 2, 1))
    aQ, bQ = extract_structure_constants(P, "E121")
    a5, b5 = extract_structure_constants(base_change(P, F5), "E121")
    assert a5 == {k: F5.coerce(v) for k, v in aQ.items()}
    assert b5 == {k: F5.coerce(v) for k, v in bQ.items()}


def test_ideal_shapes():
    I = curvature_ideal(endo_category((1, 1, 1)), "E111")
    assert (I.r, I.s) == (2, 1)
    assert I.generators[0].format() == "1*x_2*x_1"
    assert curvature_ideal(endo_category((1, 1)), "E11").s == 0
    I = curvature_ideal(endo_category((1, 2, 1)), "E121")
    assert (I.r, I.s) == (4, 1)
    assert len(I.generators[0].quadratic) == 2


def test_evaluate_examples():
    I = curvature_ideal(endo_category((1, 1, 1)), "E111")
    assert evaluate_ideal(I, [0, 0]) == [0] and is_point(I, [0, 0])
    assert evaluate_ideal(I, [1, 1]) == [1] and not is_point(I, [1, 1])
    with pytest.raises(ValueError):
        evaluate_ideal(I, [1])


def test_evaluate_matches_curvature_f5():
    rng = random.Random(0)
    P = endo_category((1, 2, 1), F5)
    I = curvature_ideal(P, "E121")
    for _ in range(100):
        z = [rng.randrange(5) for _ in range(I.r)]
        assert evaluate_ideal(I, z) == list(curvature(P.element("E121", "E121", 1, z)).coeffs)


def test_points_over_finite_fields():
    I = curvature_ideal(endo_category((1, 1, 1)), "E111")
    assert sorted(enumerate_points(I, F2)) == [(0, 0), (0, 1), (1, 0)]
    assert count_points(curvature_ideal(endo_category((1, 1)), "E11"), F2) == 2
    with pytest.raises(SearchSpaceTooLarge):
        enumerate_points(I, F5, limit=10)
    with pytest.raises(ValueError):
        enumerate_points(I, Q)


def test_points_over_dual_numbers_match_curvature():
    # points over F2[t]/(t^2) by the ideal and by direct curvature over the ring
    B = make_dual_numbers(F2)
    P = endo_category((1, 1, 1))
    I = curvature_ideal(P, "E111")
    PB = base_change(P, B)
    direct = [z for z in itertools.product(list(B.elements()), repeat=2)
              if curvature(PB.element("E111", "E111", 1, z)).is_zero()]
    assert sorted(enumerate_points(I, B)) == sorted(direct)
    assert len(direct) == 8


def test_emit_format():
    text = curvature_ideal(endo_category((1, 2, 1)), "E121").emit()
    assert text.splitlines() == [
        "# curvature ideal", "object: E121", "field: Q", "r: 4", "s: 1", "c_1 = 1*x_3*x_1 + 1*x_4*x_2",
    ]
