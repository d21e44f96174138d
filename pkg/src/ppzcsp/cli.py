"""Command-line entry point.

Exit codes: 0 success / assignment found, 10 no assignment found, 20 a
verified property failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ppzcsp import analysis, bounds, generators, kernels, solver, verify
from ppzcsp.formula import FormulaParseError, SizeError, parse, serialize

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_UNKNOWN, EXIT_VIOLATED = 0, 2, 10, 20


def _emit(payload: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))
    else:
        print(text)


def _read_instance(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse(text)


def _pairs(text: str) -> list[tuple[int, int]]:
    try:
        return [tuple(int(v) for v in item.split(":")) for item in text.split(",") if item]  # type: ignore[misc]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected d:k pairs like 2:3,3:3, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def cmd_solve(args) -> int:
    F = _read_instance(args.instance)
    if args.algo == "ppz":
        report = solver.ppz_solve(F, args.trials, args.seed, args.stop_early, args.workers)
    elif args.algo == "schoening":
        report = solver.schoening_solve(F, args.trials, args.seed, args.steps)
    else:
        found = solver.brute_solve(F)
        report = solver.SolveReport(found, 1, int(found is not None), args.seed)
    payload = {"algo": args.algo, **report.to_dict()}
    text = (
        f"found: {' '.join(map(str, report.found))}" if report.found is not None else "found: none"
    ) + f"\nsuccesses: {report.successes}/{report.trials_run}"
    _emit(payload, args.format, text)
    return EXIT_OK if report.found is not None else EXIT_UNKNOWN


def cmd_bound(args) -> int:
    quad = bounds.G_quadrature(args.d, args.k, args.tol)
    beta = bounds.G_closed_form(args.d, args.k)
    payload = {
        "d": args.d,
        "k": args.k,
        "G": quad.exponent,
        "G_beta": beta.exponent,
        "base": quad.base,
        "suboptimal_exponent": bounds.suboptimal_exponent(args.d, args.k),
    }
    try:
        payload["schoening_base"] = float(bounds.schoening_base(args.d, args.k))
    except ValueError:
        payload["schoening_base"] = None
    text = f"G={quad.exponent:.6f}, base {quad.base:.4f}  (beta closed form G={beta.exponent:.6f})"
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_table(args) -> int:
    rows = bounds.comparison_table(args.pairs)
    _emit({"rows": [r.to_dict() for r in rows]}, args.format, bounds.format_table(rows))
    return EXIT_OK


def cmd_estimate(args) -> int:
    F = _read_instance(args.instance)
    est = analysis.monte_carlo_success(F, args.trials, args.seed, args.workers)
    payload = {**est.to_dict(), "seed": args.seed, "bound": analysis.success_lower_bound(F)}
    text = f"success rate {est.p:.6g} +- {est.stderr:.2g} over {est.trials} trials"
    if args.exact:
        payload["exact"] = analysis.exact_success_prob(F)
        text += f"\nexact {payload['exact']:.6g}"
    text += f"\nbound 2^(-nG) = {payload['bound']:.6g}"
    _emit(payload, args.format, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.suite, args.seed)
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "results": [{"name": r.name, "holds": r.holds, "checks": r.checks, "detail": r.detail} for r in reports],
    }
    _emit(payload, args.format, "\n".join(r.line() for r in reports))
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATED


GENERATORS = {
    "planted": generators.planted_random,
    "distinct": generators.distinct_critical,
    "uniform": generators.uniform_random,
}


def cmd_gen(args) -> int:
    if args.kind == "chain":
        F = generators.constant_X_chain(args.n)
    else:
        spec = generators.GenSpec(args.d, args.k, args.n, args.m, args.seed)
        if args.kind == "unique":
            F = generators.unique_planted(spec)
        else:
            F = GENERATORS[args.kind](spec)
    text = serialize(F, comments=[f"{args.kind} d={args.d} k={args.k} n={args.n} m={args.m} seed={args.seed}"])
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppzcsp", description=__doc__.splitlines()[0])
    p.add_argument("--backend-info", action="store_true", help="print the kernel backend and exit")
    sub = p.add_subparsers(dest="command")

    def common(sp, workers=False):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--seed", type=int, default=0)
        if workers:
            sp.add_argument("--workers", type=_positive, default=1)

    sp = sub.add_parser("solve", help="search for a satisfying assignment")
    sp.add_argument("instance")
    sp.add_argument("--algo", choices=("ppz", "schoening", "brute"), default="ppz")
    sp.add_argument("--trials", type=_positive, default=10000, help="ppz trials or Schoening restarts")
    sp.add_argument("--steps", type=int, default=None, help="Schoening walk length (default 3n)")
    sp.add_argument("--stop-early", action="store_true")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bound", help="G(d,k) and the matching success-probability base")
    sp.add_argument("--d", type=_positive, required=True)
    sp.add_argument("--k", type=_positive, required=True)
    sp.add_argument("--tol", type=float, default=bounds.DEFAULT_TOL)
    common(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("table", help="comparison table of bases")
    sp.add_argument("--pairs", type=_pairs, default=_pairs("2:3,3:3,5:4,6:4"))
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("estimate", help="Monte Carlo success rate of ppz")
    sp.add_argument("instance")
    sp.add_argument("--trials", type=_positive, default=100000)
    sp.add_argument("--exact", action="store_true", help="also compute the exact value (n <= 8)")
    common(sp, workers=True)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("verify", help="run the property suites")
    sp.add_argument("--suite", choices=("all", *verify.SUITES), default="all")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="write an instance file")
    sp.add_argument("--kind", choices=("planted", "distinct", "uniform", "unique", "chain"), default="planted")
    sp.add_argument("--d", type=_positive, default=3)
    sp.add_argument("--k", type=_positive, default=3)
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("-o", "--output")
    common(sp)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.backend_info:
        print(kernels.BACKEND)
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (FormulaParseError, SizeError, ValueError, OSError, RuntimeError) as exc:
        print(f"ppzcsp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
