"""Lifting Maurer-Cartan data along a square-zero extension B -> B/I.

Input: an MC object (E, eta) over B, an MC object (F, zeta_I) over B/I and
degree-0 closed maps alpha_I: F -> E, a_I: E -> F that are mutually inverse
in H^0 up to the homotopies g_I, h_I.  Output: a lift theta of zeta_I with
zero curvature and a lift alpha' of alpha_I closed for d_{theta,eta}.

The engine works in two corrections:

1. eps = a.gamma + h.phi kills phi = curvature(zeta), where
   gamma = d_{zeta,eta}(alpha); theta = zeta + eps.
2. With omega = d_{theta,eta}(alpha), eps' = a.omega and t = g.omega make
   alpha + t closed for theta + eps' without changing the curvature.

Both corrections are I-valued, so every product of two of them vanishes.
Each closed form is checked exactly; sign variants are tried next, and an
exact linear solve over the I-coordinates is the last resort.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, fields

from . import linalg
from .dgcat import DGCategory, Element, base_change
from .mc import curvature, h0_inverse, is_mc, solve_coboundary, solve_linear, twisted_diff, MCObject, TwistedComplex
from .scalars import Field, SquareZeroRing

SIGNS = ((1, 1), (-1, 1), (1, -1), (-1, -1))


class LiftError(ValueError):
    pass


def reduce_element(x: Element, PI: DGCategory) -> Element:
    B = x.cat.ring
    return PI.element(x.source, x.target, x.degree, [B.reduce(c) for c in x.coeffs]) if x.coeffs \
        else PI.zero(x.source, x.target, x.degree)


def lift_element(xbar: Element, PB: DGCategory) -> Element:
    B = PB.ring
    return PB.element(xbar.source, xbar.target, xbar.degree, [B.lift(c) for c in xbar.coeffs]) if xbar.coeffs \
        else PB.zero(xbar.source, xbar.target, xbar.degree)


def in_ideal(x: Element) -> bool:
    B = x.cat.ring
    return all(B.in_ideal(c) for c in x.coeffs)


@dataclass
class LiftProblem:
    eta: Element
    zeta_I: Element
    alpha_I: Element
    a_I: Element
    g_I: Element | None = None
    h_I: Element | None = None
    lifts: dict = field(default_factory=dict)

    def __post_init__(self):
        PB, PI = self.eta.cat, self.zeta_I.cat
        B = PB.ring
        if not isinstance(B, SquareZeroRing):
            raise LiftError("eta must live over a square-zero extension")
        if PI.ring != B.residue_ring:
            raise LiftError(f"zeta_I must live over {B.residue_ring}, not {PI.ring}")
        E, F = self.eta.source, self.zeta_I.source
        if (self.alpha_I.source, self.alpha_I.target, self.alpha_I.degree) != (F, E, 0):
            raise LiftError("alpha_I must be a degree-0 map F -> E")
        if (self.a_I.source, self.a_I.target, self.a_I.degree) != (E, F, 0):
            raise LiftError("a_I must be a degree-0 map E -> F")
        if not is_mc(self.eta):
            raise LiftError(f"eta is not Maurer-Cartan over B: curvature {curvature(self.eta)}")
        if not is_mc(self.zeta_I):
            raise LiftError(f"zeta_I is not Maurer-Cartan over B/I: curvature {curvature(self.zeta_I)}")
        eta_I = self.eta_I
        if not twisted_diff(self.zeta_I, eta_I, self.alpha_I).is_zero():
            raise LiftError("alpha_I is not closed mod I")
        if not twisted_diff(eta_I, self.zeta_I, self.a_I).is_zero():
            raise LiftError("a_I is not closed mod I")
        endE = TwistedComplex(MCObject(E, eta_I), MCObject(E, eta_I))
        endF = TwistedComplex(MCObject(F, self.zeta_I), MCObject(F, self.zeta_I))
        if self.g_I is None:
            self.g_I = solve_coboundary(endE, self.alpha_I @ self.a_I - PI.identity(E))
            if self.g_I is None:
                raise LiftError("alpha_I . a_I is not homotopic to 1")
        if self.h_I is None:
            self.h_I = solve_coboundary(endF, self.a_I @ self.alpha_I - PI.identity(F))
            if self.h_I is None:
                raise LiftError("a_I . alpha_I is not homotopic to 1")
        if self.alpha_I @ self.a_I != PI.identity(E) + endE.d(self.g_I):
            raise LiftError("alpha_I . a_I != 1 + d(g_I)")
        if self.a_I @ self.alpha_I != PI.identity(F) + endF.d(self.h_I):
            raise LiftError("a_I . alpha_I != 1 + d(h_I)")
        unknown = set(self.lifts) - {"zeta", "alpha", "a", "g", "h"}
        if unknown:
            raise LiftError(f"unknown lift keys {sorted(unknown)}")

    @property
    def PB(self) -> DGCategory:
        return self.eta.cat

    @property
    def PI(self) -> DGCategory:
        return self.zeta_I.cat

    @property
    def ring(self) -> SquareZeroRing:
        return self.PB.ring

    @property
    def source(self):
        return self.eta.source

    @property
    def target(self):
        return self.zeta_I.source

    @property
    def eta_I(self) -> Element:
        return reduce_element(self.eta, self.PI)

    @classmethod
    def from_alpha(cls, eta: Element, zeta_I: Element, alpha_I: Element, **kw) -> "LiftProblem":
        """Complete the data from alpha_I alone using an H^0 inverse."""
        PI = zeta_I.cat
        eta_I = reduce_element(eta, PI)
        wit = h0_inverse(alpha_I, MCObject(zeta_I.source, zeta_I), MCObject(eta.source, eta_I))
        if wit is None:
            raise LiftError("alpha_I is not invertible in H^0")
        b, g_F, h_E = wit
        return cls(eta, zeta_I, alpha_I, b, h_E, g_F, **kw)


@dataclass
class LiftState:
    zeta: Element
    a: Element
    alpha: Element
    g: Element
    h: Element
    u: Element
    v: Element
    phi: Element | None = None
    gamma: Element | None = None
    eps: Element | None = None
    theta: Element | None = None
    omega: Element | None = None
    eps_prime: Element | None = None
    t: Element | None = None
    alpha_prime: Element | None = None
    step1_method: str = ""
    step2_method: str = ""

    def items(self):
        for f in fields(self):
            yield f.name, getattr(self, f.name)


def choose_lifts(problem: LiftProblem) -> LiftState:
    PB, PI = problem.PB, problem.PI
    chosen = {}
    for key, bar in (("zeta", problem.zeta_I), ("alpha", problem.alpha_I), ("a", problem.a_I),
                     ("g", problem.g_I), ("h", problem.h_I)):
        x = problem.lifts.get(key)
        if x is None:
            x = lift_element(bar, PB)
        elif reduce_element(x, PI) != bar:
            raise LiftError(f"chosen lift of {key} does not reduce to the given datum")
        chosen[key] = x
    eta = problem.eta
    zeta, alpha, a, g, h = (chosen[k] for k in ("zeta", "alpha", "a", "g", "h"))
    E, F = problem.source, problem.target
    u = alpha @ a - PB.identity(E) - twisted_diff(eta, eta, g)
    v = a @ alpha - PB.identity(F) - twisted_diff(zeta, zeta, h)
    if not in_ideal(u) or not in_ideal(v):
        raise LiftError("u or v is not I-valued; the homotopy data is inconsistent")
    return LiftState(zeta, a, alpha, g, h, u, v)


def _require_ideal(name, x):
    if not in_ideal(x):
        raise LiftError(f"{name} = {x} is not I-valued")


def step1_fix_curvature(state: LiftState, eta: Element, method: str = "auto") -> LiftState:
    """Correct zeta by an I-valued eps so that theta = zeta + eps is MC."""
    zeta, a, alpha, h = state.zeta, state.a, state.alpha, state.h
    PB = zeta.cat
    F = zeta.source
    phi = curvature(zeta)
    gamma = twisted_diff(zeta, eta, alpha)
    _require_ideal("phi", phi)
    _require_ideal("gamma", gamma)
    state.phi, state.gamma = phi, gamma
    if phi.is_zero():
        state.eps, state.theta, state.step1_method = PB.zero(F, F, 1), zeta, "none"
        return state
    if method in ("auto", "closed-form"):
        for s1, s2 in SIGNS:
            eps = s1 * (a @ gamma) + s2 * (h @ phi)
            if is_mc(zeta + eps):
                state.eps, state.theta = eps, zeta + eps
                state.step1_method = f"closed-form eps = {_signed(s1, 'a.gamma')} {_signed(s2, 'h.phi', True)}"
                return state
        if method == "closed-form":
            raise LiftError(f"no closed form kills the curvature {phi}")
    B = PB.ring
    sol = solve_linear([(PB, F, F, 1)], lambda e: [twisted_diff(zeta, zeta, e)], [-phi], sorted(B.ideal))
    if sol is None or not is_mc(zeta + sol[0]):
        residual = phi if sol is None else curvature(zeta + sol[0])
        raise LiftError(f"curvature cannot be corrected; residual {residual}")
    state.eps, state.theta, state.step1_method = sol[0], zeta + sol[0], "linear-solve"
    return state


def step2_fix_morphism(state: LiftState, eta: Element, method: str = "auto") -> LiftState:
    """Correct (theta, alpha) by I-valued (eps', t) so that alpha + t is closed."""
    zeta, a, alpha, g = state.theta, state.a, state.alpha, state.g
    if not is_mc(zeta):
        raise LiftError("step 2 needs a Maurer-Cartan twist")
    PB = zeta.cat
    F, E = zeta.source, eta.source
    omega = twisted_diff(zeta, eta, alpha)
    _require_ideal("omega", omega)
    state.omega = omega

    def ok(theta, alpha2):
        return is_mc(theta) and twisted_diff(theta, eta, alpha2).is_zero()

    if omega.is_zero():
        state.eps_prime, state.t = PB.zero(F, F, 1), PB.zero(F, E, 0)
        state.alpha_prime, state.step2_method = alpha, "none"
        return state
    if method in ("auto", "closed-form"):
        for s1, s2 in SIGNS:
            eps2 = s1 * (a @ omega)
            t = s2 * (g @ omega)
            if twisted_diff(zeta, zeta, eps2).is_zero() and ok(zeta + eps2, alpha + t):
                state.eps_prime, state.t = eps2, t
                state.theta, state.alpha_prime = zeta + eps2, alpha + t
                state.step2_method = f"closed-form eps' = {_signed(s1, 'a.omega')}, t = {_signed(s2, 'g.omega')}"
                return state
        if method == "closed-form":
            raise LiftError(f"no closed form closes alpha; omega = {omega}")
    B = PB.ring

    def eqs(eps2, t):
        return [twisted_diff(zeta, zeta, eps2), twisted_diff(zeta, eta, t) - alpha @ eps2]

    sol = solve_linear([(PB, F, F, 1), (PB, F, E, 0)], eqs, [PB.zero(F, F, 2), -omega], sorted(B.ideal))
    if sol is None or not ok(zeta + sol[0], alpha + sol[1]):
        raise LiftError(f"alpha cannot be closed; residual omega = {omega}")
    state.eps_prime, state.t = sol
    state.theta, state.alpha_prime = zeta + sol[0], alpha + sol[1]
    state.step2_method = "linear-solve"
    return state


def _signed(s, term, inner=False):
    if inner:
        return f"+ {term}" if s > 0 else f"- {term}"
    return term if s > 0 else f"-{term}"


@dataclass
class LiftResult:
    theta: Element
    alpha: Element
    state: LiftState
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def certificate(self) -> str:
        lines = ["# lift certificate"]
        s = self.state
        lines.append(f"step1: {s.step1_method}")
        lines.append(f"step2: {s.step2_method}")
        for name, x in s.items():
            if isinstance(x, Element):
                lines.append(f"{name} = {_fmt(x)}")
        for name, passed in self.checks.items():
            lines.append(f"check {name}: {'OK' if passed else 'FAILED'}")
        return "\n".join(lines) + "\n"


def _fmt(x: Element) -> str:
    R = x.cat.ring
    return f"[{', '.join(R.format(c) for c in x.coeffs)}] in P^{x.degree}({x.source},{x.target})"


def lift(problem: LiftProblem, method: str = "auto") -> LiftResult:
    state = choose_lifts(problem)
    step1_fix_curvature(state, problem.eta, method)
    step2_fix_morphism(state, problem.eta, method)
    PI = problem.PI
    theta, alpha2 = state.theta, state.alpha_prime
    eta = problem.eta
    s = state
    checks = {
        "d(theta) + theta^2 = 0": is_mc(theta),
        "d_{theta,eta}(alpha') = 0": twisted_diff(theta, eta, alpha2).is_zero(),
        "theta = zeta_I mod I": reduce_element(theta, PI) == problem.zeta_I,
        "alpha' = alpha_I mod I": reduce_element(alpha2, PI) == problem.alpha_I,
        "eps, eps', t are I-valued": in_ideal(s.eps) and in_ideal(s.eps_prime) and in_ideal(s.t),
        "d_{zeta,zeta}(eps') = 0": twisted_diff(s.theta - s.eps_prime, s.theta - s.eps_prime, s.eps_prime).is_zero(),
        "I^2 = 0 on corrections": (s.eps @ s.eps).is_zero() and (s.t @ s.eps_prime).is_zero()
        and (s.eps_prime @ s.eps_prime).is_zero() and (s.u @ s.omega).is_zero(),
    }
    result = LiftResult(theta, alpha2, state, checks)
    if not result.ok:
        failed = [k for k, v in checks.items() if not v]
        raise LiftError(f"lift certificate failed: {failed}")
    return result


# -- random problems ---------------------------------------------------------


def _random_element(cat: DGCategory, E, F, i, rng, ring_pick=None):
    R = cat.ring
    pick = ring_pick or (lambda: R.random(rng))
    return cat.element(E, F, i, [pick() for _ in range(cat.dim(E, F, i))]) if cat.dim(E, F, i) \
        else cat.zero(E, F, i)


def random_mc(P: DGCategory, E, rng, tries: int = 60) -> Element:
    """A random MC element over the field of P (sparse random search)."""
    k = P.ring
    r = P.dim(E, E, 1)
    best = P.zero(E, E, 1)
    for _ in range(tries):
        support = rng.sample(range(r), rng.randint(1, r)) if r else []
        coeffs = [k.zero] * r
        for j in support:
            coeffs[j] = k.random(rng)
        eta = P.element(E, E, 1, coeffs)
        if is_mc(eta) and not eta.is_zero():
            return eta
    return best


def _cocycles(P: DGCategory, eta0: Element):
    """k-basis of the degree-1 cocycles of (End(E), d_{eta0,eta0})."""
    E = eta0.source
    k = P.ring
    basis = P.basis_elements(E, E, 1)
    cols = [twisted_diff(eta0, eta0, b).coeffs for b in basis]
    n2 = P.dim(E, E, 2)
    rows = [[cols[c][r] for c in range(len(basis))] for r in range(n2)]
    if not rows:
        return basis
    return [P.element(E, E, 1, v) for v in linalg.kernel(rows, k, len(basis))]


def _random_invertible(P: DGCategory, E, rng, tries: int = 40):
    one = P.identity(E)
    for _ in range(tries):
        x = _random_element(P, E, E, 0, rng)
        sol = solve_linear([(P, E, E, 0)], lambda y: [x @ y, y @ x], [one, one])
        if sol is not None:
            return x, sol[0]
    return one, one


def random_lift_problem(P: DGCategory, B: SquareZeroRing, rng: random.Random, E=None, perturb=True) -> LiftProblem:
    """A coherent random lifting problem with F = E.

    eta = eta0 + (I-valued cocycle) over B; zeta_I is the gauge transform of
    eta0 by a random invertible x; alpha_I = x, a_I = x^{-1} + d(k) for a
    random homotopy k.  With ``perturb`` every lift gets a random I-valued
    correction so phi, gamma, u, v and omega are generically nonzero.
    """
    if not isinstance(P.ring, Field):
        raise ValueError("P must be over a field")
    k = B.base
    if B.residue_ring != k:
        raise ValueError("random problems need B/I = k")
    P = base_change(P, k)
    E = rng.choice(P.objects) if E is None else E
    eta0 = random_mc(P, E, rng)
    PB = base_change(P, B)
    eta = lift_element(eta0, PB)
    cocycles = _cocycles(P, eta0)
    for s in sorted(B.ideal):
        if not cocycles:
            break
        c = P.zero(E, E, 1)
        for z in cocycles:
            c = c + k.random(rng) * z
        eta = eta + B.basis_element(s) * lift_element(c, PB)
    x, y = _random_invertible(P, E, rng)
    zeta_I = y @ eta0 @ x + y @ x.d()
    hk = _random_element(P, E, E, -1, rng)
    alpha_I = x
    a_I = y + twisted_diff(eta0, zeta_I, hk)
    g_I = alpha_I @ hk
    h_I = hk @ alpha_I
    lifts = {}
    if perturb:
        def noise(i, S, T):
            return _random_element(PB, S, T, i, rng, lambda: B.random_ideal(rng))
        lifts = {
            "zeta": lift_element(zeta_I, PB) + noise(1, E, E),
            "alpha": lift_element(alpha_I, PB) + noise(0, E, E),
            "a": lift_element(a_I, PB) + noise(0, E, E),
            "g": lift_element(g_I, PB) + noise(-1, E, E),
            "h": lift_element(h_I, PB) + noise(-1, E, E),
        }
    return LiftProblem(eta, zeta_I, alpha_I, a_I, g_I, h_I, lifts)
