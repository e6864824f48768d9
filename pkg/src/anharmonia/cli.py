"""Command-line front end.  Exit status: 0 all checks pass, 1 a check failed, 2 usage error."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import DEFAULTS, load_config
from .errors import AnharmoniaError
from .report import Report

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    """Global flags accepted before or after the subcommand."""
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", **({"default": False} if defaults else sup),
                   help="emit JSON instead of text")
    p.add_argument("--seed", type=int, **({"default": None} if defaults else sup), help="random seed (default 0)")
    p.add_argument("--order", type=int, **({"default": None} if defaults else sup),
                   help="q-series truncation order")
    p.add_argument("--tol", type=float, **({"default": None} if defaults else sup), help="numeric tolerance")
    p.add_argument("--timing", action="store_true", **({"default": False} if defaults else sup),
                   help="include wall times in reports")
    return p


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from e


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from e


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    g = _global_flags(False)
    parser = _Parser(prog="anharmonia", description=__doc__, parents=[_global_flags(True)])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("series", parents=[g], help="print a modular q-series")
    p.add_argument("name", help="E2, E4, E6, Delta, theta2_4, theta3_4, theta4_4, lambda, e_hat1..3")

    p = sub.add_parser("mobius", parents=[g], help="finite Moebius groups")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--group", required=True)
    p.add_argument("--m", type=int, default=None, help="parameter of cyclic/dihedral groups")
    p.add_argument("--all-elements", action="store_true")

    p = sub.add_parser("anharmonic", parents=[g], help="construct an anharmonic equation")
    p.add_argument("--group", required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--emit", default="U,F,riccati")
    p.add_argument("--format", choices=["text", "json"], default=None)
    p.add_argument("--check", action="store_true", help="also run the verification report")
    p.add_argument("--resultant", action="store_true", help="cross-check F through a resultant")

    p = sub.add_parser("transvect", parents=[g], help="transvectants of binary forms")
    p.add_argument("action", nargs="?", choices=["form", "klein"], default="form")
    p.add_argument("--form", default=None, help="binomial-convention coefficients a0,...,an")
    p.add_argument("--with", dest="other", default=None, help="second form (default: the first)")
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--kind", default=None)
    p.add_argument("--check", action="store_true")

    p = sub.add_parser("darboux", parents=[g], help="Darboux polynomial identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", choices=["all", "cofactors", "relations", "tau4", "closure"], default="all")

    p = sub.add_parser("verify", parents=[g], help="verify a group of identities")
    p.add_argument("target", choices=["modular"])

    p = sub.add_parser("numeric", parents=[g], help="numeric integration checks")
    p.add_argument("action", choices=["cross-ratio", "first-integrals", "rk4", "all"])
    p.add_argument("--potential", choices=["zero", "p0"], default="p0")
    p.add_argument("--g3", type=_fraction, default=Fraction(DEFAULTS["g3"]))
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--csv", default=None, help="write the trajectory (z, Re u, Im u) to this file")

    p = sub.add_parser("schwarz", parents=[g], help="Schwarzian and hypergeometric checks")
    p.add_argument("action", choices=["eq20", "platonic", "cocycle", "search", "all"])
    p.add_argument("--a", type=_fraction, default=None, help="rational a; omitted means symbolic")
    p.add_argument("--k", type=_int_list, default=None)
    p.add_argument("--n", type=int, default=4)

    p = sub.add_parser("suite", parents=[g], help="run a named verification suite")
    p.add_argument("name", choices=["modular", "anharmonic", "darboux", "transvect", "schwarz", "numeric", "all"])
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    return parser


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, report-or-None)
# ---------------------------------------------------------------------------
def _cmd_series(args, cfg):
    from .qseries import ModularRegistry, registry

    if args.name not in ModularRegistry.names:
        raise UsageError(f"unknown series {args.name!r}; expected one of {', '.join(ModularRegistry.names)}")
    s = registry(cfg["order"])[args.name]
    return {"name": args.name, "order": cfg["order"], "series": s.to_json()}, str(s), None


def _cmd_mobius(args, cfg):
    from .mobius import group_catalog, verify_invariance

    try:
        g = group_catalog(args.group, args.m)
    except ValueError as e:
        raise UsageError(str(e)) from e
    rep = verify_invariance(g, all_elements=args.all_elements)
    return None, None, rep


def _cmd_anharmonic(args, cfg):
    from .anharmonic import construct, verify_construction

    emit = tuple(x.strip() for x in args.emit.split(",") if x.strip())
    bad = set(emit) - {"U", "F", "riccati"}
    if bad:
        raise UsageError(f"--emit accepts U, F, riccati; got {sorted(bad)}")
    res = construct(args.group, args.m, p=args.p, n=args.n, eliminate_F="F" in emit or args.check)
    rep = verify_construction(res, numeric=True, resultant=args.resultant) if args.check else None
    fmt = args.format or ("json" if args.json else "text")
    args.json = fmt == "json"
    payload = res.to_json(emit)
    if rep is not None:
        payload["report"] = rep.to_json(args.timing)
    return payload, res.render_text(emit) + ("\n" + rep.render_text(args.timing) if rep else ""), rep


def _cmd_transvect(args, cfg):
    from .binform import BinaryForm, fourth_transvectant_coeffs, klein_form, omega_transvectant

    if args.action == "klein":
        if not args.kind:
            raise UsageError("transvect klein needs --kind")
        try:
            f = klein_form(args.kind)
        except ValueError as e:
            raise UsageError(str(e)) from e
        t = fourth_transvectant_coeffs(f)
        payload = {"kind": args.kind, "form": f.to_json(), "alpha": t.to_json()}
        rep = None
        if args.check:
            rep = Report("transvect.klein")
            rep.exact(f"fourth transvectant of the {args.kind} form vanishes", all(a == 0 for a in t.a),
                      residual=str(t))
        return payload, f"f = {f}\n(f,f)^4/2 = {t}", rep
    if not args.form:
        raise UsageError("transvect needs --form a0,...,an")
    try:
        f = BinaryForm([Fraction(x) for x in args.form.split(",")])
        g = BinaryForm([Fraction(x) for x in args.other.split(",")]) if args.other else f
        t = omega_transvectant(f, g, args.r, normalized=True)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from e
    payload = {"f": f.to_json(), "g": g.to_json(), "r": args.r, "transvectant": t.to_json()}
    return payload, f"(f, g)^{args.r} = {t}", None


def _cmd_darboux(args, cfg):
    from . import darboux

    n = args.n
    if n == 2:
        return None, None, darboux.n2_impossibility()
    if n < 2:
        raise UsageError("--n must be at least 2")
    runners = {
        "all": darboux.darboux_suite,
        "cofactors": darboux.verify_cofactors,
        "relations": darboux.verify_first_integral_relations,
        "tau4": darboux.tau4_check,
        "closure": darboux.closure_check,
    }
    rep = runners[args.check](n)
    for c in rep.checks:
        c.details.setdefault("constants", darboux.constants(n))
    return None, None, rep


def _cmd_verify(args, cfg):
    from .suites import modular_suite

    return None, None, modular_suite(order=cfg["order"])


def _cmd_numeric(args, cfg):
    from . import numeric

    steps = args.steps or cfg["steps"]
    tol = cfg["tol"] if cfg["tol"] != DEFAULTS["tol"] else None
    if args.action == "all":
        return None, None, numeric.numeric_suite(steps)
    if args.action == "rk4":
        rep = numeric.numeric_suite(steps)
        keep = [c for c in rep.checks if "RK4" in c.name or "returns" in c.name or "u(1)" in c.name]
        return None, None, Report("numeric.rk4", keep)
    if args.action == "first-integrals":
        rep = numeric.first_integral_drift(4, args.g3, (0.6 + 0.1j, 1.1 + 0.5j, steps))
        return None, None, rep
    P = numeric.p0_series(args.g3, cfg["p0_order"])
    if args.potential == "p0":
        B0 = lambda z: 0.75 * P(z)  # noqa: E731
        path = (0.5 + 0.3j, 1.0 + 0.6j, steps)
        numeric._check_disk(__import__("numpy").array(path[:2]), args.g3)
        ics = [0.3, -0.5, 1.2 + 0.4j, 2j]
    else:
        B0 = lambda z: 0.0  # noqa: E731
        path, ics = (0, 1, steps), [1, 2, 3, 4]
    ric = (B0, lambda z: 0.0, lambda z: -1.0)
    rep = numeric.cross_ratio_drift(ric, ics, path, tol)
    if args.csv:
        traj = numeric.rk4_integrate(numeric.riccati_system(*ric), ics, path[0], path[1], path[2])
        with open(args.csv, "w") as fh:
            fh.write(traj.to_csv(0))
    return None, None, rep


def _cmd_schwarz(args, cfg):
    from . import schwarz

    if args.action == "eq20":
        if args.a is not None and args.a == 0:
            raise UsageError("--a must be nonzero")
        return None, None, schwarz.eq20_verify(args.a)
    if args.action == "platonic":
        k = args.k or [2, 3, 5]
        if len(k) != 3 or any(x < 1 for x in k):
            raise UsageError("--k takes three positive integers")
        N = schwarz.platonic_order(*k)
        rep = Report("schwarz.platonic")
        rep.exact(f"platonic_order{tuple(k)} = {N}", True, N=N, k=k)
        return None, None, rep
    if args.action == "cocycle":
        return None, None, schwarz.cocycle_check(50, cfg["seed"])
    if args.action == "search":
        return None, None, schwarz.substitution_search(args.n)
    return None, None, schwarz.schwarz_suite(cfg["seed"])


def _cmd_suite(args, cfg):
    from .suites import run_suite

    opts = {"seed": cfg["seed"], "cases": args.cases or cfg["cases"]}
    if args.name in ("modular", "all"):
        opts["order"] = cfg["order"]
    if args.name in ("numeric", "all"):
        opts["steps"] = cfg["steps"]
    return None, None, run_suite(args.name, jobs=args.jobs, **opts)


HANDLERS = {
    "series": _cmd_series,
    "mobius": _cmd_mobius,
    "anharmonic": _cmd_anharmonic,
    "transvect": _cmd_transvect,
    "darboux": _cmd_darboux,
    "verify": _cmd_verify,
    "numeric": _cmd_numeric,
    "schwarz": _cmd_schwarz,
    "suite": _cmd_suite,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required; see --help")
        cfg = load_config({"seed": args.seed, "order": args.order, "tol": args.tol})
        if cfg["order"] < 1:
            raise UsageError("--order must be positive")
        payload, text, rep = HANDLERS[args.command](args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=err)
        return EXIT_USAGE
    except (AnharmoniaError, ValueError, KeyError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_USAGE
    if args.json:
        body = payload if payload is not None else rep.to_json(args.timing)
        print(json.dumps(body, indent=2, sort_keys=True, default=str), file=out)
    else:
        print(text if text is not None else rep.render_text(args.timing), file=out)
    if rep is not None and not rep.passed:
        return EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
