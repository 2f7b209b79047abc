"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import asymptotics, markov_analysis, recurrence, simulator
from .records import OutputRecord, to_csv, to_json
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


class ConsistencyError(Exception):
    def __init__(self, message: str, payload: str | None = None):
        super().__init__(message)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_mean(args) -> list[OutputRecord]:
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if n == 1:
        return [OutputRecord(n=1, quantity="mean", exact=Fraction(0), metadata={"method": "convention"})]
    methods = {
        "recurrence": recurrence.mean_by_recurrence,
        "closed-form": recurrence.mean_by_closed_form,
        "matrix": markov_analysis.mean_by_matrix,
    }
    chosen = list(methods) if args.method == "all" else [args.method]
    out = [OutputRecord(n=n, quantity="mean", exact=methods[m](n), metadata={"method": m}) for m in chosen]
    if len({r.exact for r in out}) > 1:
        raise ConsistencyError("mean methods disagree", payload=to_json(out))
    return out


def cmd_pmf(args) -> list[OutputRecord]:
    if args.k_max is not None and args.tail is not None:
        raise UsageError("give at most one of --k-max and --tail")
    if args.k_max is not None:
        table = markov_analysis.pmf_table(args.n, args.k_max)
    else:
        table = markov_analysis.pmf_until_tail(args.n, Fraction(args.tail or markov_analysis.DEFAULT_TAIL))
    rows = [
        OutputRecord(n=args.n, quantity="pmf", exact=p, metadata={"k": str(k)})
        for k, p in enumerate(table.probs, start=1)
    ]
    rows.append(
        OutputRecord(n=args.n, quantity="pmf", exact=table.tail_mass, metadata={"k": f">{table.k_max}", "row": "tail"})
    )
    return rows


def cmd_variance(args) -> list[OutputRecord]:
    return [OutputRecord(n=args.n, quantity="variance", exact=markov_analysis.variance(args.n), metadata={"method": "matrix"})]


def cmd_bounds(args) -> list[OutputRecord]:
    lower, upper = asymptotics.bounds(args.n)
    mean = recurrence.mean_by_recurrence(args.n)
    return [
        OutputRecord(n=args.n, quantity="bounds", exact=lower, metadata={"side": "lower"}),
        OutputRecord(n=args.n, quantity="bounds", exact=upper, metadata={"side": "upper"}),
        OutputRecord(n=args.n, quantity="mean", exact=mean, metadata={"method": "recurrence"}),
    ]


def cmd_remainder(args) -> list[OutputRecord]:
    exact = asymptotics.remainder_exact(args.n)
    approx, bound = asymptotics.remainder_series(args.n, args.l_max)
    return [
        OutputRecord(n=args.n, quantity="remainder", exact=exact, metadata={"method": "exact"}),
        OutputRecord(
            n=args.n,
            quantity="remainder",
            approx=repr(approx),
            metadata={"method": "series", "l_max": str(args.l_max), "truncation_bound": repr(bound)},
        ),
    ]


def cmd_exit(args) -> list[OutputRecord]:
    law = markov_analysis.exit_time_mean(args.n)
    return [OutputRecord(n=args.n, quantity="exit_time", exact=law.mean, metadata={"stay_prob": _frac_str(law.stay_prob)})]


def cmd_simulate(args) -> list[OutputRecord]:
    report = simulator.estimate(args.n, args.trials, args.seed)
    histogram = ";".join(f"{k}:{c}" for k, c in report.histogram.items())
    return [
        OutputRecord(
            n=args.n,
            quantity="simulation",
            approx=repr(report.mean),
            metadata={
                "seed": str(report.seed),
                "trials": str(report.trials),
                "rng": report.rng,
                "variance": repr(report.variance),
                "std_error": repr(report.std_error),
                "max_k_observed": str(report.max_k_observed),
                "histogram": histogram,
            },
        )
    ]


def cmd_verify(args) -> str:
    summary = run_checks(args.n_max)
    if args.format == "json":
        text = json.dumps(summary.to_dict(), indent=2)
    else:
        lines = ["invariant,n,detail"] + [f'{f.invariant},{f.n},"{f.detail}"' for f in summary.failures]
        lines.append(f"summary,{summary.n_max},passed={summary.passed} values_checked={summary.values_checked}")
        text = "\n".join(lines) + "\n"
    if not summary.passed:
        first = summary.failures[0]
        raise ConsistencyError(f"invariant {first.invariant} failed at n={first.n}: {first.detail}", payload=text)
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write here instead of stdout")

    parser = _Parser(prog="rps-stoptime", description="Stopping times of the n-player Rock-Paper-Scissors game.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mean", parents=[common], help="mean stopping time E_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("recurrence", "closed-form", "matrix", "all"), default="all")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("pmf", parents=[common], help="stopping-time mass function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-max", type=int)
    p.add_argument("--tail", type=str, help="stop once the exact tail mass is below this decimal")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("variance", parents=[common], help="variance of the stopping time")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("bounds", parents=[common], help="exponential lower and upper bounds on E_n")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("remainder", parents=[common], help="E_n - (1/3)(3/2)^n, exact and by series")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l-max", type=int, default=10**6)
    p.set_defaults(func=cmd_remainder)

    p = sub.add_parser("exit", parents=[common], help="mean first exit time from the initial state")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_exit)

    p = sub.add_parser("simulate", parents=[common], help="seeded Monte Carlo estimate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run the exact invariant sweep")
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        result = args.func(args)
    except ConsistencyError as exc:
        if exc.payload:
            _emit(exc.payload, args.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (UsageError, ValueError, ArithmeticError, simulator.RoundCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        _emit(result, args.output)
    else:
        _emit(to_json(result) if args.format == "json" else to_csv(result), args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
