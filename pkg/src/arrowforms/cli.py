"""Command-line front end.

Subcommands: enumerate, solve, check, boundary, eval, verify, gv, selftest.
All outputs are deterministic given --seed; files use the plain-text formats
of the textio module.  Exit code 0 means success / all checks passed; a
nonzero exit carries a diagnostic naming the first failure.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import engine, textio
from .diagrams import DiagramError, GaussDiagram
from .relations import MarkingWindow, gen_family

CACHE_ENV = "ARROWFORMS_CACHE_DIR"


class CliError(Exception):
    pass


def _window(args, K=None):
    if K is None:
        K = args.K
    if K is None:
        raise CliError("--K is required")
    if args.markings is None:
        raise CliError("--markings is required (lo..hi or a comma list)")
    try:
        return MarkingWindow.parse(args.markings, K)
    except ValueError as e:
        raise CliError("bad --markings value: %s" % e)


def _cache_dir(args):
    if args.cache_dir:
        return args.cache_dir
    return os.environ.get(CACHE_ENV) or None


def _read(path):
    try:
        with open(path, "r") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(str(e))


def _load_formula(path):
    return textio.parse_formula(_read(path))


def _load_gauss(path):
    d = textio.parse_diagram(_read(path))
    if not isinstance(d, GaussDiagram):
        raise CliError("%s: expected a gauss diagram" % path)
    return d


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_enumerate(args):
    from .relations import enumerate_diagrams

    if args.species not in ("gauss", "arrow"):
        raise CliError("--species must be gauss or arrow")
    w = _window(args)
    ds = enumerate_diagrams(args.species, args.degree, w)
    lines = ["count=%d" % len(ds)]
    for d in ds:
        lines.append("aut=%d" % d.aut_order())
        lines.append(textio.print_diagram(d))
        lines.append("---")
    _emit("\n".join(lines), args.output)
    return 0


def cmd_solve(args):
    w = _window(args)
    basis = engine.solve_formula_space(args.degree, w, cache_dir=_cache_dir(args))
    header = " degree=%d K=%d markings=%s" % (
        args.degree, w.K, ",".join(str(v) for v in w.values()),
    )
    _emit(textio.print_basis(basis, header_extra=header), args.output)
    print("dimension=%d" % len(basis), file=sys.stderr)
    return 0


def _first_failing_instance(f, window):
    """(family, instance) for the first nonzero constraint pairing, if any."""
    support = list(f.vector.keys())
    for fam in ("ap1", "ap2", "a6t"):
        for deg in f.degrees():
            instances = gen_family(fam, deg, window, closure=False, hosts=support)
            for i, inst in enumerate(instances):
                if engine._pair_with(f, inst) != 0:
                    return fam, deg, i, inst
    return None


def cmd_check(args):
    f = _load_formula(args.formula)
    w = _window(args, K=args.K if args.K is not None else f.K)
    if w.K != f.K:
        raise CliError("formula has K=%d but --K is %d" % (f.K, w.K))
    report = engine.check_formula(f, w)
    for fam in ("ap1", "ap2", "a6t"):
        print("%s max |pairing| = %s" % (fam, report["families"][fam]))
    print("boundary zero = %s" % str(report["boundary_zero"]).lower())
    print("consistent = %s" % str(report["consistent"]).lower())
    print("passes = %s" % str(report["passes"]).lower())
    if report["passes"]:
        return 0
    hit = _first_failing_instance(f, w)
    if hit is not None:
        fam, deg, i, inst = hit
        print(
            "first failing instance: family=%s degree=%d index=%d" % (fam, deg, i),
            file=sys.stderr,
        )
        print(textio.print_lincomb(inst.vector), file=sys.stderr)
    else:
        print("failure: boundary is nonzero", file=sys.stderr)
    return 1


def cmd_boundary(args):
    from .boundary import boundary_d

    f = _load_formula(args.formula)
    if args.markings is not None:
        w = _window(args, K=f.K)
    else:
        marks = f.markings()
        w = MarkingWindow(set(marks) | {0, f.K}, f.K)
    d = boundary_d(f.vector, engine.normalization_window(w))
    body = textio.print_lincomb(d)
    out = (body + "\n" if body else "") + ("zero=%s" % str(not d).lower())
    _emit(out, args.output)
    return 0


def cmd_eval(args):
    f = _load_formula(args.formula)
    g = _load_gauss(args.knot)
    v = Fraction(engine.evaluate(f, g))
    print("value=%d/%d" % (v.numerator, v.denominator))
    return 0


def cmd_verify(args):
    f = _load_formula(args.formula)
    g = _load_gauss(args.knot)
    marking_set = None
    if args.markings is not None:
        marking_set = set(MarkingWindow.parse(args.markings, f.K).allowed)
    report = engine.verify_invariance(
        f, g, trials=args.trials, walk_length=args.walk_length,
        seed=args.seed, marking_set=marking_set,
    )
    v = Fraction(report["value"])
    print("value=%d/%d" % (v.numerator, v.denominator))
    print("trials=%d walk_length=%d" % (report["trials"], report["walk_length"]))
    print("constant=%s" % str(report["constant"]).lower())
    if report["constant"]:
        return 0
    vi = report["violation"]
    print(
        "violation: trial=%d step=%d move=%r" % (vi["trial"], vi["step"], vi["move"]),
        file=sys.stderr,
    )
    return 1


def cmd_gv(args):
    try:
        gamma = tuple(int(t) for t in args.gamma.split(","))
    except ValueError:
        raise CliError("--gamma expects a comma list of nonzero integers")
    try:
        f = engine.gv_formula(len(gamma) - 1, gamma)
    except ValueError as e:
        raise CliError(str(e))
    _emit(textio.print_formula(f), args.output)
    print("terms=%d K=%d" % (len(f.vector), f.K), file=sys.stderr)
    return 0


def cmd_selftest(args):
    """Small deterministic battery touching every layer; < 1 minute."""
    from .diagrams import ArrowDiagram, canonical_arrows
    from .maps import double_angle, pair_norm, sign_expand_S, subdiagram_expand_I
    from .relations import enumerate_diagrams

    rng = random.Random(args.seed)
    failures = []

    def step(name, ok):
        print("%s %s" % ("PASS" if ok else "FAIL", name))
        if not ok:
            failures.append(name)

    # canonicalization is idempotent and rotation invariant
    ok = True
    for _ in range(200):
        n = rng.randint(1, 4)
        pos = list(range(2 * n))
        rng.shuffle(pos)
        arrows = [
            (pos[2 * i], pos[2 * i + 1], rng.randint(-2, 3), rng.choice((1, -1)))
            for i in range(n)
        ]
        d = GaussDiagram(rng.randint(-2, 4), arrows)
        if canonical_arrows(n, d.arrows) != d.arrows:
            ok = False
        r = rng.randrange(2 * n)
        rot = [((t + r) % (2 * n), (h + r) % (2 * n), m, s) for (t, h, m, s) in arrows]
        if GaussDiagram(d.K, rot) != d:
            ok = False
    step("canonical form: idempotent and rotation invariant", ok)

    # bracket identity on random pairs
    w = MarkingWindow(range(0, 3), 2)
    arrs = enumerate_diagrams("arrow", 2, w)
    gsss = enumerate_diagrams("gauss", 2, w)
    ok = True
    for _ in range(50):
        a, g = rng.choice(arrs), rng.choice(gsss)
        if double_angle(a, g) != pair_norm(sign_expand_S(a), subdiagram_expand_I(g)):
            ok = False
    step("bracket identity on random pairs", ok)

    # file round trips
    ok = True
    for _ in range(50):
        d = rng.choice(gsss)
        if textio.parse_diagram(textio.print_diagram(d)) != d:
            ok = False
    step("text format round trip", ok)

    # solver output passes the static checker
    w = MarkingWindow({1, 2}, 3)
    basis = engine.solve_formula_space(2, w, cache_dir=_cache_dir(args))
    ok = bool(basis) and all(engine.check_formula(f, w)["passes"] for f in basis)
    step("solver basis passes static checks (dimension %d)" % len(basis), ok)

    # planar chain formulas land in the solver kernel
    f = engine.gv_formula(2, (1, 1, 1))
    wgv = MarkingWindow({1, 2}, 3)
    ok = engine.check_formula(f, wgv)["passes"]
    step("planar chain formula passes static checks", ok)

    # a short invariance walk
    g0 = GaussDiagram(3, [(0, 2, 1, 1), (1, 3, 2, -1)])
    rep = engine.verify_invariance(basis[0], g0, trials=3, walk_length=8, seed=args.seed)
    step("random move walks keep the evaluation constant", rep["constant"])

    if failures:
        print("failed: %s" % "; ".join(failures), file=sys.stderr)
        return 1
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="arrowforms",
        description="Arrow-diagram invariants of virtual knots in the annulus.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--K", type=int, default=None, help="global circle marking")
    common.add_argument("--markings", default=None, help="marking window: lo..hi or a,b,c")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--threads", type=int, default=1,
                        help="reserved; outputs are identical for any value")
    common.add_argument("--cache-dir", default=None,
                        help="solver cache directory (or $%s)" % CACHE_ENV)
    common.add_argument("-o", "--output", default=None, help="write to file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("enumerate", parents=[common], help="list canonical diagrams")
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--species", default="arrow")
    q.set_defaults(func=cmd_enumerate)

    q = sub.add_parser("solve", parents=[common], help="basis of the formula space")
    q.add_argument("--degree", type=int, required=True)
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("check", parents=[common], help="static checks on a formula file")
    q.add_argument("formula")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("boundary", parents=[common], help="boundary of a formula file")
    q.add_argument("formula")
    q.set_defaults(func=cmd_boundary)

    q = sub.add_parser("eval", parents=[common], help="evaluate a formula on a knot")
    q.add_argument("formula")
    q.add_argument("knot")
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("verify", parents=[common], help="randomized move-invariance check")
    q.add_argument("formula")
    q.add_argument("knot")
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--walk-length", type=int, default=20)
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("gv", parents=[common], help="planar chain formula from classes")
    q.add_argument("--gamma", required=True, help="comma list of nonzero integers")
    q.set_defaults(func=cmd_gv)

    q = sub.add_parser("selftest", parents=[common], help="quick internal battery")
    q.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, textio.ParseError, DiagramError, ValueError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
