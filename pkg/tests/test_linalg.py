from fractions import Fraction

from hypothesis import given, settings, strategies as st

from dgmc import linalg
from dgmc.scalars import Field

Q, F3 = Field.rationals(), Field.prime(3)


def matrices(k, max_dim=4):
    ent = st.integers(-3, 3).map(k.coerce)
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(ent, min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=60)
@given(matrices(Q))
def test_kernel_vectors_are_killed_and_rank_nullity(A):
    n = len(A[0])
    K = linalg.kernel(A, Q, n)
    for v in K:
        assert all(x == 0 for x in linalg.matvec(A, v, Q))
    assert len(K) + linalg.rank(A, Q, n) == n


@settings(max_examples=60)
@given(matrices(F3), st.data())
def test_solve_consistent_systems(A, data):
    n = len(A[0])
    x0 = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    b = linalg.matvec(A, x0, F3)
    x = linalg.solve(A, b, F3, n)
    assert x is not None and linalg.matvec(A, x, F3) == b


def test_solve_inconsistent():
    A = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]]
    assert linalg.solve(A, [Fraction(1), Fraction(3)], Q, 2) is None


def test_rref_pivots():
    rows, piv = linalg.rref([[0, 2, 4], [0, 1, 2], [1, 0, 1]], Q, 3)
    assert piv == [0, 1]
    assert rows[0][0] == 1 and rows[1][1] == 1
