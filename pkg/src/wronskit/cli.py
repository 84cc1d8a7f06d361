"""Command line entry point ``wronskit``; every subcommand prints JSON to stdout."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import WronskitError
from .polyring import mp


def parse_number(tok: str):
    """Rational when possible ("1/3", "0.31"), otherwise complex ("1+2j" or "1+2i")."""
    tok = tok.strip()
    try:
        return Fraction(tok)
    except ValueError:
        return complex(tok.replace("i", "j").replace(" ", ""))


def parse_list(text: str) -> list:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def _mpc(x):
    if isinstance(x, Fraction):
        return mp.mpc(mp.mpf(x.numerator) / x.denominator)
    return mp.mpc(x)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _roots_from_args(args) -> tuple[int, int, list]:
    if args.problem:
        from .grassmann import RamificationSeq, SchubertProblem

        prob = SchubertProblem.parse(args.problem)
        iota = RamificationSeq.iota(prob.n, prob.d)
        if any(a != iota or s is None for a, s in prob.conditions):
            raise WronskitError("only problems made of i@point conditions reduce to a Wronskian")
        return prob.n, prob.d, [s for _, s in prob.conditions]
    if args.n is None or args.d is None or args.roots is None:
        raise WronskitError("give --n, --d and --roots, or --problem")
    return args.n, args.d, parse_list(args.roots)


def cmd_solve_wronski(args) -> int:
    from .wronski_solve import inverse_wronski

    n, d, roots = _roots_from_args(args)
    fib = inverse_wronski(None, n, d, roots=[_mpc(r) for r in roots], seed=args.seed)
    _emit(fib.to_json(args.real_tol))
    return 0 if fib.complete else 2


def _loop_waypoints(spec: str, base: list) -> list:
    """``rot:k`` or ``rot:k:w1,...,wN`` (rotation by k places), else explicit ``a,b,..;c,d,..``."""
    from .wronski_solve import rotation_waypoints

    if spec.startswith("rot:"):
        parts = spec.split(":")
        weights = [Fraction(w) for w in parts[2].split(",")] if len(parts) > 2 else None
        return rotation_waypoints(base, int(parts[1]), weights)
    return [[Fraction(v) for v in chunk.split(",")] for chunk in spec.split(";")]


def cmd_monodromy(args) -> int:
    from .wronski_solve import (
        cayley_root,
        circle_root_path,
        continue_fiber,
        cycle_notation,
        inverse_wronski,
        slide_permutation,
    )

    base = [Fraction(v) for v in args.base.split(",")]
    wps = _loop_waypoints(args.loop, base)
    fib = inverse_wronski(None, args.n, args.d, roots=[cayley_root(q) for q in base], seed=args.seed)
    if not fib.complete:
        raise WronskitError("base fiber is incomplete")
    _, perm = continue_fiber(fib, circle_root_path(wps))
    if perm is None:
        raise WronskitError("the loop does not return to the base configuration")
    out = {"n": args.n, "d": args.d, "base": [str(q) for q in base], "permutation": perm, "cycles": cycle_notation(perm)}
    if args.slides:
        shape = tuple([args.d - args.n] * (args.n + 1))
        tabs, sperm = slide_permutation(shape, wps)
        out["slide_permutation"] = sperm
        out["slide_cycles"] = cycle_notation(sperm)
        out["tableaux"] = [T.to_json() for T in tabs]
    _emit(out)
    return 0


def cmd_bethe(args) -> int:
    from .bethe import MasterParams, fundamental_operator, kernel_polynomials, solve_critical

    s = MasterParams(tuple(_mpc(r) for r in parse_list(args.roots)), args.n, args.d)
    pts = solve_critical(s, seed=args.seed)
    orbits = []
    for x in pts:
        P = kernel_polynomials(fundamental_operator(x, s))
        orbits.append(
            {
                "x": x.to_json(),
                "polys": [p.to_json() for p in x.polys()],
                "space": P.to_json(),
                "real": x.is_conjugation_stable(),
            }
        )
    from .grassmann import degree_iota

    _emit({"orbits": orbits, "expected": degree_iota(args.n, args.d)})
    return 0


def cmd_gaudin(args) -> int:
    from .gaudin import ALL_CHECKS, gaudin_instance_checks

    checks = ALL_CHECKS if args.checks == "all" else [c.strip() for c in args.checks.split(",")]
    t0 = None if args.t0 is None else _mpc(parse_number(args.t0))
    rep = gaudin_instance_checks(args.n, args.d, [_mpc(r) for r in parse_list(args.roots)], t0=t0, checks=checks, seed=args.seed)
    _emit(rep.to_json())
    return 0 if rep.ok else 1


def cmd_zmatrix(args) -> int:
    from .spectra import build_Z, eigen_real_test, relation_roundtrip

    b = [float(x) for x in parse_list(args.b)]
    extra = {}
    if args.a is not None:
        rel = relation_roundtrip([_mpc(x) for x in parse_list(args.a)], b)
        alpha = [complex(x) for x in rel.alpha]
        extra = {"wronskian_roots_match": float(rel.deviation)}
    else:
        alpha = [complex(_mpc(x)) for x in parse_list(args.alpha)]
    Z = build_Z(b, alpha)
    ev = Z.eigenvalues()
    _emit(
        {
            **Z.to_json(),
            **extra,
            "spectrum": [[float(mp.re(e)), float(mp.im(e))] for e in ev],
            "real_spectrum": eigen_real_test(Z),
            "alpha_real": all(a.imag == 0 for a in alpha),
        }
    )
    return 0


def cmd_cm(args) -> int:
    from .spectra import cm_reality_sample, cm_roundtrip

    real = cm_reality_sample(args.size, args.sample, seed=args.seed)
    rt = cm_roundtrip(args.size, min(args.sample, 50), seed=args.seed)
    _emit(
        {
            "reality": real.to_json(),
            "roundtrip": {
                "trials": rt.trials,
                "max_b_error": rt.max_b_error,
                "max_alpha_error": rt.max_alpha_error,
                "max_rank_ratio": rt.max_rank_ratio,
                "ok": rt.ok(),
            },
        }
    )
    return 0 if real.violations == 0 else 1


def cmd_fourlines(args) -> int:
    from .fourlines import lines_meeting_four, monotone_flag_instance, wronskian_of_line
    from .wronski_solve import inverse_wronski, is_real_space

    if args.monotone:
        v, w = (parse_number(x) for x in args.monotone)
        _emit(monotone_flag_instance(v, w).to_json())
        return 0
    s4 = "inf" if args.s4.lower() in ("inf", "oo") else parse_number(args.s4)
    sol = lines_meeting_four(s4)
    out = sol.to_json()
    if s4 != "inf":
        fib = inverse_wronski(None, 1, 3, roots=[-1, 0, 1, _mpc(s4)], seed=args.seed)
        wr = [float(wronskian_of_line(L).monic().distance(fib.target)) for L in sol.lines]
        out["cross_check"] = {
            "inverse_wronski_count": len(fib.solutions),
            "inverse_wronski_real": sum(is_real_space(s.space) for s in fib.solutions),
            "counts_agree": len(fib.solutions) == len(sol.lines)
            and sum(is_real_space(s.space) for s in fib.solutions) == sol.real_count,
            "wronskian_distance": wr,
        }
    if args.csv:
        lines = ["line,u,x,y,z"]
        for k, L in enumerate(sol.lines):
            for u in range(-10, 11):
                p = L.at(Fraction(u, 2))
                lines.append(f"{k},{u / 2}," + ",".join(f"{float(mp.re(c)):.10g}" for c in p))
        with open(args.csv, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    _emit(out)
    return 0


def cmd_experiment(args) -> int:
    from .harness import ExperimentConfig, run_experiment

    cfg = ExperimentConfig.load(args.config)
    if args.workers is not None:
        cfg.workers = args.workers

    def progress(res):
        if args.verbose:
            print(f"trial {res.index}: class={res.cls} real={res.real}/{res.found}", file=sys.stderr)

    rec = run_experiment(cfg, args.out, stop_after=args.stop_after, progress=progress)
    _emit(
        {
            "out": args.out,
            "recorded": len(rec.trials),
            "completed": len(rec.completed()),
            "trials": cfg.trials,
            "table": rec.frequency_table(),
        }
    )
    return 0


def cmd_degree(args) -> int:
    from .grassmann import degree_iota, real_degree, white_formula

    _emit(
        {
            "n": args.n,
            "d": args.d,
            "degree": degree_iota(args.n, args.d),
            "real_degree": real_degree(args.n, args.d),
            "white_formula": white_formula(args.n, args.d),
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wronskit", description="Inverse Wronski problems and real Schubert calculus checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def nd(sp, required=True):
        sp.add_argument("--n", type=int, required=required)
        sp.add_argument("--d", type=int, required=required)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("solve-wronski", help="all spaces of polynomials with the given Wronskian roots")
    nd(sp, required=False)
    sp.add_argument("--roots", help="comma separated roots, e.g. -1,0,1,0.31")
    sp.add_argument("--problem", help='Schubert problem string, e.g. "G(1,3): i@-1 i@0 i@1 i@0.31"')
    sp.add_argument("--real-tol", type=float, default=1e-20)
    sp.set_defaults(func=cmd_solve_wronski)

    sp = sub.add_parser("monodromy", help="permutation of a fiber along a loop of real root configurations")
    nd(sp)
    sp.add_argument("--base", required=True, help="root angles in units of pi, increasing, e.g. 1/10,37/100,...")
    sp.add_argument("--loop", required=True, help="rot:k, rot:k:w1,..,wN, or explicit waypoints a,b,..;c,d,..")
    sp.add_argument("--slides", action="store_true", help="also report the tableau slide permutation")
    sp.set_defaults(func=cmd_monodromy)

    sp = sub.add_parser("bethe", help="critical points of the master function")
    nd(sp)
    sp.add_argument("--roots", required=True)
    sp.set_defaults(func=cmd_bethe)

    sp = sub.add_parser("gaudin", help="Gaudin operator checks on Bethe vectors")
    nd(sp)
    sp.add_argument("--roots", required=True)
    sp.add_argument("--checks", default="all", help="comma list or 'all'")
    sp.add_argument("--t0", default=None, help="evaluation point (default: right of all roots)")
    sp.set_defaults(func=cmd_gaudin)

    sp = sub.add_parser("zmatrix", help="spectrum of Z(b, alpha)")
    sp.add_argument("--b", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", help="diagonal of Z")
    g.add_argument("--a", help="roots a_i of the quasi-polynomials (t - a_i) e^(b_i t); alpha is derived")
    sp.set_defaults(func=cmd_zmatrix)

    sp = sub.add_parser("cm", help="Calogero-Moser reality sampling and normalization round trips")
    sp.add_argument("--sample", type=int, required=True)
    sp.add_argument("--size", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_cm)

    sp = sub.add_parser("fourlines", help="lines meeting four tangent lines of the twisted cubic")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--s4", help="fourth tangency point (real, complex or inf)")
    g.add_argument("--monotone", nargs=2, metavar=("V", "W"), help="secant line through gamma(v), gamma(w)")
    sp.add_argument("--csv", help="write plot-ready points along each transversal")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_fourlines)

    sp = sub.add_parser("experiment", help="run or resume an experiment config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--stop-after", type=int, default=None, help="stop after this many new trials")
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("degree", help="degree and real degree of the Wronski map")
    nd(sp)
    sp.set_defaults(func=cmd_degree)
    return p


# options whose values may start with a minus sign, e.g. --roots -1,0,1
_VALUE_OPTIONS = {"--roots", "--b", "--alpha", "--a", "--s4", "--base", "--t0", "--problem"}


def _glue_negative_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except WronskitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
