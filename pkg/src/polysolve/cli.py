"""Command-line front end: ``polysolve count|solve|groebner|lagrange|demo``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from .groebner import ResourceCapError, buchberger, eliminate, solve_groebner_eigen
from .homotopy import TooManyPathsError, TrackerConfig, solve_homotopy
from .linalg import EigenConvergenceError, SingularMatrixError
from .macaulay import (EigenConfig, InconsistentSystemError, MacaulayError, coordinate_matrices,
                       quotient_from_macaulay, solutions_from_quotient)
from .poly import MonomialOrder, ParseError, Polynomial, PolySystem, format_poly, read_system
from .root_counts import count_report
from .solutions import SolutionSet
from . import systems

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_MISMATCH = 4

METHODS = ("eigen", "homotopy", "groebner-eigen")
DEMOS = ("clebsch27", "wilkinson", "curves7", "robot")

log = logging.getLogger("polysolve")


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# library-level helpers


def lagrange_system(g: Polynomial, constraints: Sequence[Polynomial],
                    names: Sequence[str], multiplier: str = "lam") -> PolySystem:
    """Critical-point equations of L = g - sum lam_i h_i in (x, lam)."""
    k = len(names)
    l = len(constraints)
    new = [f"{multiplier}{i + 1}" for i in range(l)]
    clash = set(new) & set(names)
    if clash:
        raise ValueError(f"multiplier name(s) {sorted(clash)} collide with the variables")
    n = k + l

    def lift(p: Polynomial) -> Polynomial:
        return Polynomial(n, {m + (0,) * l: c for m, c in p.terms.items()})

    L = lift(g)
    for i, h in enumerate(constraints):
        L = L - Polynomial.variable(k + i, n) * lift(h)
    eqs = [L.diff(i) for i in range(k)] + [lift(h) for h in constraints]
    return PolySystem(tuple(eqs), tuple(names) + tuple(new))


def solve_system(F: PolySystem, method: str, *, seed: int = 0, tol: float = 1e-8,
                 trace=None, dump=None) -> SolutionSet:
    if method == "eigen":
        cfg = EigenConfig(seed=seed, tol=tol)
        try:
            Q, M, R = quotient_from_macaulay(F, cfg)
        except InconsistentSystemError as exc:
            return SolutionSet([], F.names, [str(exc)], {"delta": 0})
        if dump is not None:
            dump(M, R, Q)
        out = solutions_from_quotient(F, Q, cfg)
        out.stats["degree"] = M.degree
        return out
    if method == "homotopy":
        return solve_homotopy(F, TrackerConfig(seed=seed, residual_tol=tol), trace=trace)
    if method == "groebner-eigen":
        return solve_groebner_eigen(F, EigenConfig(seed=seed, tol=tol))
    raise ValueError(f"unknown method {method!r}")


def macaulay_dump_text(M, R, Q) -> str:
    """CSV sections: Macaulay matrix, reduced matrix, multiplication matrices."""
    from .macaulay import MultiplicationMatrix

    parts = ["# macaulay", M.with_columns(R.columns).to_csv(), "# reduced", R.to_csv()]
    names = Q.names
    for k, mat in enumerate(coordinate_matrices(Q)):
        g = Polynomial.variable(k, Q.nvars, Q.field)
        parts += [f"# M_{names[k]}", MultiplicationMatrix(g, Q, mat).to_csv()]
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# output


def _fmt_complex(z: complex, digits: int = 12) -> str:
    # imaginary parts at rounding level are noise; JSON output keeps them
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


def print_solutions(S: SolutionSet, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(S.to_json() + "\n")
        return
    names = S.names
    out.write(f"{len(S)} solution(s), {len(S.real())} real\n")
    for i, s in enumerate(S):
        coords = ", ".join(f"{nm} = {_fmt_complex(z)}" for nm, z in zip(names, s.point))
        tag = "real" if s.is_real else "complex"
        out.write(f"  [{i}] {coords}   ({tag}, residual {s.residual:.1e}, {s.provenance})\n")


# ---------------------------------------------------------------------------
# subcommands


def _load(path: str) -> PolySystem:
    try:
        return read_system(path)
    except FileNotFoundError:
        raise CLIError(f"{path}: no such file", EXIT_PARSE) from None
    except ParseError as exc:
        raise CLIError(f"{path}: {exc}", EXIT_PARSE) from None


def cmd_count(args) -> int:
    F = _load(args.file)
    rep = count_report(F).to_dict()
    if args.json:
        print(json.dumps(rep))
    else:
        for key in ("bezout", "kushnirenko", "bkk"):
            print(f"{key}: {rep[key] if rep[key] is not None else '-'}")
        for note in rep["notes"]:
            print(f"note: {note}")
    return EXIT_OK


def cmd_solve(args) -> int:
    F = _load(args.file)
    trace_rows: list = []
    dump_text: list[str] = []
    trace = None
    if args.trace_paths:
        if args.method != "homotopy":
            raise CLIError("--trace-paths needs --method homotopy", EXIT_PARSE)

        def trace(st):
            trace_rows.append((st.path, st.steps, st.t, st.dt, st.x.copy()))
    dump = None
    if args.dump_macaulay:
        if args.method != "eigen":
            raise CLIError("--dump-macaulay needs --method eigen", EXIT_PARSE)

        def dump(M, R, Q):
            dump_text.append(macaulay_dump_text(M, R, Q))
    S = solve_system(F, args.method, seed=args.seed, tol=args.tol, trace=trace, dump=dump)
    if args.dump_macaulay and dump_text:
        Path(args.dump_macaulay).write_text(dump_text[0])
    if args.trace_paths:
        with open(args.trace_paths, "w", newline="") as fh:
            w = csv.writer(fh)
            head = ["path", "step", "t", "dt"]
            for nm in F.names:
                head += [f"re_{nm}", f"im_{nm}"]
            w.writerow(head)
            for p, k, t, dt, x in trace_rows:
                row = [p, k, repr(t), repr(dt)]
                for z in x:
                    row += [repr(z.real), repr(z.imag)]
                w.writerow(row)
    for d in S.diagnostics:
        log.warning(d)
    if args.output:
        with open(args.output, "w") as fh:
            print_solutions(S, args.json, fh)
    else:
        print_solutions(S, args.json)
    return EXIT_OK


def cmd_groebner(args) -> int:
    F = _load(args.file)
    if args.eliminate is not None:
        if not 0 <= args.eliminate <= F.nvars:
            raise CLIError(f"--eliminate must lie in 0..{F.nvars}", EXIT_PARSE)
        gens = eliminate(F, args.eliminate)
    else:
        gens = buchberger(F, MonomialOrder(args.order)).generators
    for g in gens:
        print(format_poly(g, F.names))
    return EXIT_OK


def cmd_lagrange(args) -> int:
    F = _load(args.file)
    g, hs = F.polys[0], list(F.polys[1:])
    try:
        L = lagrange_system(g, hs, F.names, args.multiplier)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_PARSE) from None
    text = L.format()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.solve:
        S = solve_system(L, args.method, seed=args.seed, tol=args.tol)
        print_solutions(S, args.json)
    return EXIT_OK


# --- demos -----------------------------------------------------------------


def _check(ok: bool, what: str, failures: list[str]) -> None:
    print(f"  [{'ok' if ok else 'MISMATCH'}] {what}")
    if not ok:
        failures.append(what)


def demo_clebsch27(seed: int) -> list[str]:
    fails: list[str] = []
    F = systems.clebsch_lines()
    rep = count_report(F)
    print("Lines on the Clebsch cubic surface (4 unknowns a1, a2, b1, b2)")
    _check(rep.bezout == 81, f"Bezout number {rep.bezout} (expected 81)", fails)
    _check(rep.bkk == 45, f"mixed volume {rep.bkk} (expected 45)", fails)
    t0 = time.perf_counter()
    S = solve_homotopy(F, TrackerConfig(seed=seed))
    print(f"  tracked {S.stats['paths']} paths in {time.perf_counter() - t0:.1f}s: "
          f"{S.stats['converged']} converged, {S.stats['diverged']} diverged, {S.stats['failed']} failed")
    _check(len(S) == 27, f"{len(S)} distinct solutions (expected 27)", fails)
    _check(len(S.real()) == len(S) == 27, f"{len(S.real())} real solutions (expected 27)", fails)
    worst = max((s.residual for s in S), default=float("inf"))
    _check(worst <= 1e-8, f"largest residual {worst:.1e} (expected <= 1e-8)", fails)
    return fails


def demo_wilkinson(seed: int) -> list[str]:
    fails: list[str] = []
    F = systems.wilkinson(12)
    print("Wilkinson polynomial (x-1)(x-2)...(x-12) from the twelfth roots of unity")
    S = solve_homotopy(F, TrackerConfig(seed=seed))
    roots = sorted(float(s.point[0].real) for s in S)
    for r in roots:
        print(f"  endpoint {r:.10f}")
    err = max(abs(a - b) for a, b in zip(roots, range(1, 13))) if len(roots) == 12 else float("inf")
    _check(len(S) == 12, f"{len(S)} endpoints (expected 12)", fails)
    _check(err <= 1e-6, f"max endpoint error {err:.1e} (expected <= 1e-6)", fails)
    return fails


def demo_curves7(seed: int) -> list[str]:
    fails: list[str] = []
    F = systems.curves7()
    rep = count_report(F)
    print("Two plane cubics meeting in seven points")
    _check((rep.bezout, rep.kushnirenko, rep.bkk) == (9, 6, 6),
           f"bezout/kushnirenko/bkk = {rep.bezout}/{rep.kushnirenko}/{rep.bkk} (expected 9/6/6)", fails)
    for method in ("eigen", "homotopy"):
        S = solve_system(F, method, seed=seed)
        print(f"  {method}:")
        print_solutions(S, False)
        _check(len(S) == 7 and len(S.real()) == 7, f"{method}: {len(S)} solutions, "
               f"{len(S.real())} real (expected 7, 7)", fails)
        for target in ((0.0, 0.0), (1.0, 1.0)):
            d = min((np.linalg.norm(s.point - np.array(target)) for s in S), default=np.inf)
            _check(d <= 1e-8, f"{method}: rational point {target} found (distance {d:.1e})", fails)
        if method == "homotopy":
            _check(S.stats["diverged"] == 2, f"homotopy: {S.stats['diverged']} of 9 paths diverged "
                   "(expected 2)", fails)
    return fails


def demo_robot(seed: int) -> list[str]:
    fails: list[str] = []
    F = systems.robot_arm(1, 1, 1, 1)
    print("Planar two-link arm, L1 = L2 = 1, hand at (1, 1)")
    rep = count_report(F)
    _check(rep.bezout == 4, f"Bezout number {rep.bezout} (expected 4)", fails)
    for method in ("eigen", "homotopy"):
        S = solve_system(F, method, seed=seed)
        pts = sorted((round(float(s.point[0].real), 9), round(float(s.point[1].real), 9)) for s in S)
        pts = [(x + 0.0, y + 0.0) for x, y in pts]
        print(f"  {method}: elbow positions {pts}")
        _check(pts == [(0.0, 1.0), (1.0, 0.0)], f"{method}: elbows at (0, 1) and (1, 0)", fails)
    return fails


DEMO_FUNCS = {"clebsch27": demo_clebsch27, "wilkinson": demo_wilkinson,
              "curves7": demo_curves7, "robot": demo_robot}


def cmd_demo(args) -> int:
    fails = DEMO_FUNCS[args.name](args.seed)
    if fails:
        print(f"{args.name}: {len(fails)} expectation(s) not met")
        return EXIT_MISMATCH
    print(f"{args.name}: all expectations met")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polysolve",
                                description="Root counts and solvers for polynomial systems.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="Bezout, Kushnirenko and BKK root counts")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_count)

    def solver_flags(q):
        q.add_argument("--method", choices=METHODS, default="eigen")
        q.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="solve a square system")
    s.add_argument("file")
    solver_flags(s)
    s.add_argument("-o", "--output")
    s.add_argument("--dump-macaulay", metavar="FILE")
    s.add_argument("--trace-paths", metavar="FILE")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("groebner", help="reduced Groebner basis or elimination ideal")
    g.add_argument("file")
    g.add_argument("--order", choices=("lex", "grlex", "grevlex"), default="grevlex")
    g.add_argument("--eliminate", type=int, metavar="J",
                   help="generators of the ideal intersected with the first J variables")
    g.set_defaults(func=cmd_groebner)

    lg = sub.add_parser("lagrange", help="critical-point system: first line objective, rest constraints")
    lg.add_argument("file")
    lg.add_argument("-o", "--output")
    lg.add_argument("--multiplier", default="lam", help="prefix for the multiplier variables")
    lg.add_argument("--solve", action="store_true", help="also solve the emitted system")
    solver_flags(lg)
    lg.set_defaults(func=cmd_lagrange)

    d = sub.add_parser("demo", help="run a worked case study and check its expected counts")
    d.add_argument("name", choices=DEMOS)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MacaulayError, EigenConvergenceError, SingularMatrixError, ResourceCapError,
            TooManyPathsError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
