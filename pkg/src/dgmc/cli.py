"""dgmc command line.

Exit status: 0 success, 1 a verification failed (the witness is printed),
2 malformed input.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import fileformat as ff
from .dgcat import AxiomError, base_change, validate_category
from .lifting import LiftError, LiftProblem, lift, random_lift_problem
from .mc import MCObject, TwistedComplex, curvature, is_mc, mc_category
from .scalars import Field, RingError, SquareZeroRing, make_dual_numbers, parse_ring
from .variety import SearchSpaceTooLarge, curvature_ideal, enumerate_points


class Malformed(Exception):
    pass


class Failed(Exception):
    pass


def _ring(args, default):
    if args.field is None and not args.dual_numbers:
        return default
    k = Field.parse(args.field) if args.field else (default if isinstance(default, Field) else default.base)
    return make_dual_numbers(k) if args.dual_numbers else k


def _load(args):
    try:
        with open(args.file) as fh:
            doc = fh.read()
    except OSError as e:
        raise Malformed(f"cannot read {args.file}: {e.strerror}")
    P = ff.build_category(ff.parse_category(doc))
    return P


def _object(P, name):
    if name is None:
        if len(P.objects) == 1:
            return P.objects[0]
        raise Malformed(f"--object is required; objects are {', '.join(P.objects)}")
    if name not in P.objects:
        raise Malformed(f"unknown object {name!r}; objects are {', '.join(P.objects)}")
    return name


def _over(P, R):
    if R == P.ring:
        return P
    if not isinstance(P.ring, Field):
        raise Malformed("base change needs a category over a field")
    try:
        return base_change(P, R)
    except RingError as e:
        raise Malformed(str(e))


def _fmt_vec(R, v):
    return "(" + ", ".join(R.format(c) for c in v) + ")"


def _fmt_matrix(F, m):
    return "[" + "; ".join(" ".join(F.format(c) for c in row) for row in m) + "]"


# -- commands --------------------------------------------------------------


def cmd_check(args, out):
    P = _load(args)
    P = _over(P, _ring(args, P.ring))
    out.append(f"ring: {P.ring.name}")
    out.append(f"objects: {' '.join(P.objects)}")
    try:
        validate_category(P)
    except AxiomError as e:
        out.append("axioms: FAILED")
        out.append(f"violated: {e.axiom}")
        out.append(f"witness: {e.witness}")
        if e.detail:
            out.append(f"detail: {e.detail}")
        raise Failed()
    out.append("axioms: OK")


def cmd_mc_verify(args, out):
    P = _load(args)
    P = _over(P, _ring(args, P.ring))
    E = _object(P, args.object)
    eta = P.element(E, E, 1, ff.parse_coefficients(args.eta, P.ring))
    c = curvature(eta)
    out.append(f"eta = {_fmt_vec(P.ring, eta.coeffs)} on {E}")
    out.append(f"curvature = {_fmt_vec(P.ring, c.coeffs)}")
    ok = c.is_zero()
    if args.target is not None or args.zeta is not None:
        F = _object(P, args.target) if args.target else E
        if args.zeta is None:
            raise Malformed("--target needs --zeta")
        zeta = P.element(F, F, 1, ff.parse_coefficients(args.zeta, P.ring))
        zc = curvature(zeta)
        out.append(f"zeta = {_fmt_vec(P.ring, zeta.coeffs)} on {F}")
        out.append(f"curvature(zeta) = {_fmt_vec(P.ring, zc.coeffs)}")
        ok = ok and zc.is_zero()
        T = TwistedComplex(MCObject(E, eta), MCObject(F, zeta))
        sq = T.check_square_zero()
        out.append(f"twisted d^2 = 0: {'yes' if sq else 'no'}")
        ok = ok and sq
    out.append(f"MC: {'yes' if ok else 'no'}")
    if not ok:
        raise Failed()


def cmd_variety_emit(args, out):
    P = _load(args)
    if not isinstance(P.ring, Field):
        raise Malformed("the curvature ideal needs a category over a field")
    E = _object(P, args.object)
    ideal = curvature_ideal(P, E)
    if args.field:
        ideal = ideal.over(Field.parse(args.field))
    out.append(ideal.emit().rstrip("\n"))


def cmd_variety_count(args, out):
    P = _load(args)
    if not isinstance(P.ring, Field):
        raise Malformed("the curvature ideal needs a category over a field")
    E = _object(P, args.object)
    R = _ring(args, P.ring)
    if not R.is_finite:
        raise Malformed(f"cannot count points over the infinite ring {R.name}; pass --field Fp")
    ideal = curvature_ideal(P, E)
    try:
        pts = enumerate_points(ideal, R)
    except SearchSpaceTooLarge as e:
        raise Malformed(str(e))
    if args.list:
        for z in pts:
            out.append(_fmt_vec(R, z))
    out.append(f"{len(pts)} points")


def _load_problem(path):
    try:
        with open(path) as fh:
            raw = ff.loads(fh.read(), "lift problem")
    except OSError as e:
        raise Malformed(f"cannot read {path}: {e.strerror}")
    keys = {"format", "category", "ring", "source", "target", "eta", "zeta", "alpha", "a"}
    for k in raw:
        if k not in keys:
            raise ff.ParseError(f"unknown key {k!r}", "$")
    for k in keys - {"a", "target"}:
        if k not in raw:
            raise ff.ParseError(f"missing key {k!r}", "$")
    if raw["format"] != "dgmc-lift/1":
        raise ff.ParseError(f"unsupported format {raw['format']!r}", "$.format")
    cat_path = os.path.join(os.path.dirname(os.path.abspath(path)), raw["category"])
    with open(cat_path) as fh:
        P = ff.build_category(ff.parse_category(fh.read()))
    B = parse_ring(raw["ring"])
    if not isinstance(B, SquareZeroRing) or not B.ideal:
        raise ff.ParseError("the lift ring must be a square-zero extension", "$.ring")
    PB, PI = _over(P, B), _over(P, B.residue_ring)
    E = raw["source"]
    F = raw.get("target", E)
    for o in (E, F):
        if o not in P.objects:
            raise ff.ParseError(f"unknown object {o!r}", "$")

    def read(cat, X, Y, i, key):
        vals = raw[key]
        R = cat.ring
        cs = [R.coerce(tuple(R.base.coerce(Fraction(x)) for x in v) if isinstance(v, list) else Fraction(v)) for v in vals]
        return cat.element(X, Y, i, cs)

    eta = read(PB, E, E, 1, "eta")
    zeta_I = read(PI, F, F, 1, "zeta")
    alpha_I = read(PI, F, E, 0, "alpha")
    if "a" in raw:
        return LiftProblem(eta, zeta_I, alpha_I, read(PI, E, F, 0, "a"))
    return LiftProblem.from_alpha(eta, zeta_I, alpha_I)


def cmd_lift(args, out):
    if args.problem:
        try:
            prob = _load_problem(args.problem)
        except (LiftError,) as e:
            raise Malformed(f"bad lift problem: {e}")
        try:
            res = lift(prob)
        except LiftError as e:
            out.append(f"lift: FAILED ({e})")
            raise Failed()
        out.append(res.certificate().rstrip("\n"))
        out.append("lift: OK")
        return
    if args.random is None:
        raise Malformed("lift needs --problem FILE or --random K")
    P = _load(args) if args.file else None
    if P is None:
        from .complexes import endo_category
        P = endo_category((1, 1, 1))
    k = Field.parse(args.field) if args.field else (P.ring if isinstance(P.ring, Field) else P.ring.base)
    B = make_dual_numbers(k)
    rng = random.Random(args.seed)
    bad = 0
    for n in range(args.random):
        prob = random_lift_problem(P, B, rng)
        try:
            res = lift(prob)
            out.append(f"problem {n}: {prob.source} over {B.name}: OK [{res.state.step1_method}; {res.state.step2_method}]")
        except LiftError as e:
            bad += 1
            out.append(f"problem {n}: {prob.source} over {B.name}: FAILED ({e})")
    out.append(f"lifted {args.random - bad}/{args.random}")
    if bad:
        raise Failed()


def _mc_pair(args, P):
    X = _object(P, args.object)
    Y = _object(P, args.target) if args.target else X
    if args.eta is None and args.zeta is None:
        return P, X, Y
    eta = P.element(X, X, 1, ff.parse_coefficients(args.eta, P.ring)) if args.eta else P.zero(X, X, 1)
    zeta = P.element(Y, Y, 1, ff.parse_coefficients(args.zeta, P.ring)) if args.zeta else (
        eta if Y == X else P.zero(Y, Y, 1))
    for name, z in (("eta", eta), ("zeta", zeta)):
        if not is_mc(z):
            raise Failed(f"{name} is not Maurer-Cartan: curvature {_fmt_vec(P.ring, curvature(z).coeffs)}")
    objs = [MCObject(X, eta, "X")] if (X == Y and eta == zeta) else [MCObject(X, eta, "X"), MCObject(Y, zeta, "Y")]
    A = mc_category(P, objs)
    return A, "X", ("X" if len(objs) == 1 else "Y")


def cmd_dp_emit(args, out):
    from .simplicial.dold_kan import dold_puppe, truncate
    P = _load(args)
    P = _over(P, _ring(args, P.ring))
    A, X, Y = _mc_pair(args, P)
    N = args.level if args.level is not None else P.bound + 2
    C = truncate(A, X, Y)
    S = dold_puppe(C, N)
    F = C.field
    out.append("# dold-puppe")
    out.append(f"field: {F.name}")
    src = _object(P, args.object)
    out.append(f"hom: {src} -> {_object(P, args.target) if args.target else src}")
    out.append(f"complex dims (C_0..C_{C.top}): {' '.join(map(str, C.dims))}")
    for k in range(1, C.top + 1):
        out.append(f"boundary {k}: {_fmt_matrix(F, C.boundary(k))}")
    out.append(f"N: {N}")
    out.append(f"ranks: {' '.join(map(str, S.ranks))}")
    for n in range(N + 1):
        out.append(f"level {n}: rank {S.ranks[n]}")
        for sigma, k, off in S.summands[n]:
            out.append(f"  summand {''.join(map(str, sigma))} -> C_{k} at {off}")
        if n >= 1:
            for i in range(n + 1):
                out.append(f"  d_{i} = {_fmt_matrix(F, S.face(n, i))}")
        if n < N:
            for j in range(n + 1):
                out.append(f"  s_{j} = {_fmt_matrix(F, S.degeneracy(n, j))}")
    bad = S.identity_violations()
    out.append(f"simplicial identities: {'OK' if not bad else 'FAILED ' + repr(bad[0])}")
    if bad:
        raise Failed()


def cmd_nerve_emit(args, out):
    from .simplicial.category import SimplicialCategory
    from .simplicial.nerve import MaterializationError, NerveSlice, segal_check
    P = _load(args)
    P = _over(P, _ring(args, P.ring))
    N = args.level if args.level is not None else 2
    S = NerveSlice(SimplicialCategory(P, N), N)
    F = P.base_field
    out.append("# nerve slice")
    out.append(f"ring: {P.ring.name}")
    out.append(f"N: {N}")
    ok = True
    for n in range(N + 1):
        for m in range(N + 1):
            lv = S.level(n, m)
            size = f" size {S.cardinality(n, m)}" if F.is_finite else ""
            out.append(f"({n},{m}): {len(lv)} strings{size}")
            for xs, ranks in lv:
                out.append(f"  {' '.join(xs)} ranks {' '.join(map(str, ranks)) or '-'}")
            if n >= 2:
                try:
                    good = segal_check(S, n, m)
                    how = "materialized" if F.is_finite else "structural"
                except MaterializationError:
                    good = segal_check(S, n, m, materialize=False)
                    how = "structural"
                out.append(f"  segal: {'OK' if good else 'FAILED'} ({how})")
                ok = ok and good
    if not ok:
        raise Failed()


def cmd_prestack(args, out):
    from .simplicial.nerve import MaterializationError, mc_prestack_value
    P = _load(args)
    if not isinstance(P.ring, Field):
        raise Malformed("prestack needs a category over a field")
    R = _ring(args, P.ring)
    objects = None
    if args.mc:
        objects = []
        for spec in args.mc:
            if "=" not in spec:
                raise Malformed(f"--mc expects OBJECT=COEFFS, got {spec!r}")
            E, cs = spec.split("=", 1)
            _object(P, E)
            objects.append((E, ff.parse_coefficients(cs, R)))
    elif not R.is_finite:
        raise Malformed("over an infinite ring list MC objects with --mc OBJECT=COEFFS")
    try:
        val = mc_prestack_value(P, R, args.level, objects)
    except (MaterializationError, SearchSpaceTooLarge) as e:
        raise Malformed(str(e))
    out.append(val.emit().rstrip("\n"))


COMMANDS = {
    "check": cmd_check,
    "mc-verify": cmd_mc_verify,
    "variety-emit": cmd_variety_emit,
    "variety-count": cmd_variety_count,
    "lift": cmd_lift,
    "dp-emit": cmd_dp_emit,
    "nerve-emit": cmd_nerve_emit,
    "prestack": cmd_prestack,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="dgmc", description="Exact computations with finite dg-categories.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help, file=True):
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file", nargs="?" if name == "lift" else None, help="category description (.cat)")
        p.add_argument("--field", help="Q or Fp, e.g. F5")
        p.add_argument("--dual-numbers", action="store_true", help="work over k[t]/(t^2)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--level", type=int, help="simplicial cap N")
        p.add_argument("--object", help="object label")
        return p

    add("check", "validate the dg-category axioms")
    p = add("mc-verify", "check a Maurer-Cartan element")
    p.add_argument("--eta", required=True, help="comma-separated coefficients in P^1(E,E)")
    p.add_argument("--target", help="second object for the twisted complex")
    p.add_argument("--zeta", help="MC element on the second object")
    add("variety-emit", "print the curvature ideal")
    p = add("variety-count", "count MC points over a finite ring")
    p.add_argument("--list", action="store_true", help="also print the points")
    p = add("lift", "solve lifting problems")
    p.add_argument("--problem", help="lift problem file")
    p.add_argument("--random", type=int, help="number of random problems")
    p.add_argument("--seed", type=int, default=0)
    for name, help in (("dp-emit", "Dold-Puppe data of a truncated hom complex"),):
        p = add(name, help)
        p.add_argument("--target", help="target object (default: --object)")
        p.add_argument("--eta", help="MC twist on the source")
        p.add_argument("--zeta", help="MC twist on the target")
    add("nerve-emit", "structural nerve levels and Segal checks")
    p = add("prestack", "interior levels of MC(P (x) R)")
    p.add_argument("--mc", action="append", help="OBJECT=COEFFS, repeatable; required over Q")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = []
    status = 0
    try:
        COMMANDS[args.command](args, out)
    except Failed as e:
        if e.args:
            out.append(str(e.args[0]))
        status = 1
    except (Malformed, ff.ParseError, RingError) as e:
        print(f"dgmc: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"dgmc: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"dgmc: error: {e}", file=sys.stderr)
        return 2
    text = "\n".join(out) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
