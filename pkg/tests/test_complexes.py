import itertools

from dgmc.complexes import buchsbaum_eisenbud_ideal, endo_category, random_complex
from dgmc.dgcat import validate_category
from dgmc.mc import is_mc
from dgmc.scalars import Field
from dgmc.variety import curvature_ideal, enumerate_points

F2, F3 = Field.prime(2), Field.prime(3)


def test_hom_dimensions():
    P = endo_category((1, 1))
    assert P.dim("E11", "E11", 1) == 1 and P.dim("E11", "E11", 2) == 0
    P = endo_category((1, 1, 1))
    assert P.dim("E111", "E111", 1) == 2 and P.dim("E111", "E111", 2) == 1
    assert P.d == {}


def test_multi_object_validates():
    validate_category(endo_category([(1, 1, 1), (2, 1), (1, 0, 1)], F3))


def test_be_ideal_examples():
    assert buchsbaum_eisenbud_ideal((1, 1, 1)).s == 1
    g = buchsbaum_eisenbud_ideal((1, 2, 1)).generators
    assert len(g) == 1 and len(g[0].quadratic) == 2
    assert buchsbaum_eisenbud_ideal((2, 2)).s == 0


def test_mc_points_are_complexes():
    # a point is MC exactly when consecutive matrix products vanish
    for v in [(1, 1, 1), (1, 2, 1)]:
        P = endo_category(v, F2)
        E = P.objects[0]
        pts = set(enumerate_points(curvature_ideal(P, E), F2))
        for z in itertools.product([0, 1], repeat=P.dim(E, E, 1)):
            # entries: d0 is v1 x v0, d1 is v2 x v1, both row-major
            n0 = v[1] * v[0]
            d0 = [z[i * v[0]:(i + 1) * v[0]] for i in range(v[1])]
            d1 = [z[n0 + i * v[1]:n0 + (i + 1) * v[1]] for i in range(v[2])]
            prod = [[sum(d1[x][y] * d0[y][w] for y in range(v[1])) % 2 for w in range(v[0])] for x in range(v[2])]
            assert (z in pts) == all(c == 0 for row in prod for c in row)


def test_random_complex_is_mc():
    import random
    rng = random.Random(0)
    for v in [(1, 2, 1), (2, 2, 2), (1, 1, 1, 1)]:
        P = endo_category(v, F3)
        E = P.objects[0]
        for _ in range(20):
            assert is_mc(P.element(E, E, 1, random_complex(v, F3, rng)))
