import random

import pytest

from dgmc.complexes import endo_category
from dgmc.dgcat import base_change
from dgmc.lifting import (LiftError, LiftProblem, choose_lifts, lift, lift_element, random_lift_problem,
                          reduce_element, step1_fix_curvature, step2_fix_morphism)
from dgmc.mc import curvature, is_mc, twisted_diff
from dgmc.scalars import Field, SquareZeroRing, make_dual_numbers, make_truncated_polynomials

Q, F5, F7 = Field.rationals(), Field.prime(5), Field.prime(7)
E = "E111"


def worked_problem(with_zeta_lift=True):
    P = endo_category((1, 1, 1))
    B = make_dual_numbers(Q)
    PB = base_change(P, B)
    eta = PB.element(E, E, 1, [1, 0])
    zeta_I = P.element(E, E, 1, [1, 0])
    one = P.identity(E)
    lifts = {"zeta": PB.element(E, E, 1, [(1, 1), (0, 1)])} if with_zeta_lift else {}
    return LiftProblem(eta, zeta_I, one, one, P.zero(E, E, -1), P.zero(E, E, -1), lifts)


def test_worked_example_step1():
    prob = worked_problem()
    st = choose_lifts(prob)
    assert st.u.is_zero() and st.v.is_zero()
    step1_fix_curvature(st, prob.eta)
    B = prob.ring
    t = B.basis_element(1)
    assert st.phi.coeffs == (t,)
    assert st.gamma.coeffs == (B.neg(t), B.neg(t))
    assert is_mc(st.theta)
    assert reduce_element(st.theta, prob.PI) == prob.zeta_I


def test_worked_example_step2_and_certificate():
    prob = worked_problem()
    res = lift(prob)
    # theta comes back to eta, so nothing is left to close
    assert res.theta == prob.eta
    assert res.state.omega.is_zero() and res.alpha == lift_element(prob.alpha_I, prob.PB)
    cert = res.certificate()
    assert "FAILED" not in cert and cert.count(": OK") == len(res.checks)


def test_forced_linear_solve_agrees_on_contract():
    prob = worked_problem()
    res = lift(prob, method="solve")
    assert res.state.step1_method == "linear-solve"
    assert is_mc(res.theta) and twisted_diff(res.theta, prob.eta, res.alpha).is_zero()


def test_identity_problem_is_fixed_point():
    prob = worked_problem(with_zeta_lift=False)
    st = choose_lifts(prob)
    assert st.u.is_zero() and st.v.is_zero()
    assert st.zeta == lift_element(prob.zeta_I, prob.PB)
    res = lift(prob)
    assert res.state.step1_method == "none"


def test_trivial_ideal():
    # B = k with I = 0: the problem data are already over B
    B = SquareZeroRing(Q, ("1",), (((1,),),), frozenset())
    P = endo_category((1, 1, 1))
    PB = base_change(P, B)
    eta = PB.element(E, E, 1, [1, 0])
    prob = LiftProblem.from_alpha(eta, P.element(E, E, 1, [1, 0]), P.identity(E))
    res = lift(prob)
    assert res.theta == eta
    assert res.alpha == lift_element(P.identity(E), PB)


def test_corrupted_lift_data_rejected():
    prob = worked_problem()
    PB = prob.PB
    prob.lifts["alpha"] = PB.element(E, E, 0, [2, 1, 1])
    with pytest.raises(LiftError):
        choose_lifts(prob)


def test_rejects_non_mc_input():
    P = endo_category((1, 1, 1))
    PB = base_change(P, make_dual_numbers(Q))
    with pytest.raises(LiftError):
        LiftProblem.from_alpha(PB.element(E, E, 1, [1, 1]), P.element(E, E, 1, [1, 1]), P.identity(E))


def test_truncated_cubic_ring():
    # B = Q[t]/(t^3), I = (t^2), B/I = Q[t]/(t^2)
    B = make_truncated_polynomials(Q, 3)
    R = B.residue_ring
    P = endo_category((1, 1, 1))
    PB, PI = base_change(P, B), base_change(P, R)
    eta = PB.element(E, E, 1, [(1, 0, 1), 0])
    alpha_I = PI.identity(E)
    # zeta_I = eta mod I, with a lift of zeta whose curvature is nonzero in I
    zeta_I = reduce_element(eta, PI)
    lifts = {"zeta": PB.element(E, E, 1, [(1, 0, 3), (0, 0, 2)])}
    prob = LiftProblem.from_alpha(eta, zeta_I, alpha_I, lifts=lifts)
    res = lift(prob)
    assert not res.state.phi.is_zero()
    assert curvature(res.theta).is_zero()
    assert twisted_diff(res.theta, eta, res.alpha).is_zero()
    assert reduce_element(res.theta, PI) == zeta_I


@pytest.mark.parametrize("k", [Q, F5, F7])
def test_random_batches(k):
    rng = random.Random({"Q": 1, "F5": 2, "F7": 3}[k.name])
    B = make_dual_numbers(k)
    cats = [endo_category(v, k) for v in [(1, 1, 1), (1, 2, 1), (1, 1, 1, 1)]]
    for n in range(50):
        prob = random_lift_problem(cats[n % 3], B, rng)
        st = choose_lifts(prob)
        # the chosen lifts reduce to the problem data
        assert reduce_element(st.zeta, prob.PI) == prob.zeta_I
        assert reduce_element(st.alpha, prob.PI) == prob.alpha_I
        res = lift(prob)
        assert res.ok


def test_step2_with_nonzero_omega_over_q():
    rng = random.Random(12)
    B = make_dual_numbers(Q)
    cats = [endo_category(v, Q) for v in [(1, 1, 1), (1, 2, 1), (2, 1, 1)]]
    done = 0
    while done < 100:
        prob = random_lift_problem(cats[done % 3], B, rng)
        st = choose_lifts(prob)
        step1_fix_curvature(st, prob.eta)
        if twisted_diff(st.theta, prob.eta, st.alpha).is_zero():
            continue
        step2_fix_morphism(st, prob.eta)
        assert not st.omega.is_zero()
        assert is_mc(st.theta)
        assert twisted_diff(st.theta, prob.eta, st.alpha_prime).is_zero()
        done += 1
