"""``pdedim`` command line.

Exit codes: 0 when every cross-check passes, 1 for a failed cross-check or
another diagnostic (no stabilization, genericity, resource limit), 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .cartan import GenericityFailure
from .fileformat import InputError, dumps, parse_system
from .gci import ConditionViolated, GciProfile, gci_dimension, gci_rank, lemma_sides
from .hilbert import NoStabilization, NonIntegerResult
from .presets import PRESET_NAMES, PresetParameterError, UnknownPreset, preset
from .report import AnalysisOptions, analyze
from .spencer import IncompleteTable
from .symbolic import DEFAULT_LIMIT_BASIS, ResourceLimitExceeded

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-degree", type=_positive, default=None, metavar="K",
                   help="degree window (default 2*max order + n + 4)")
    p.add_argument("--seed", type=int, default=0, help="seed for the Cartan flags (default 0)")
    p.add_argument("--flag-samples", type=_positive, default=3, metavar="N", help="flags per order (default 3)")
    p.add_argument("--limit-basis", type=_positive, default=DEFAULT_LIMIT_BASIS, metavar="B",
                   help=f"refuse ambient spaces larger than B (default {DEFAULT_LIMIT_BASIS})")
    _output_flags(p)


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None, metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdedim", description="Functional dimension and rank of linear PDE symbol systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="analyze a pdedim/v1 system file")
    a.add_argument("file", type=Path)
    _analysis_flags(a)

    pr = sub.add_parser("preset", help="emit or analyze a built-in system")
    pr.add_argument("name", help=f"one of {', '.join(PRESET_NAMES)}")
    pr.add_argument("--param", action="append", default=[], metavar="K=V", help="preset parameter, e.g. n=4")
    mode = pr.add_mutually_exclusive_group()
    mode.add_argument("--emit", action="store_true", help="print the system file")
    mode.add_argument("--run", action="store_true", help="run the analysis (default)")
    _analysis_flags(pr)

    g = sub.add_parser("gci", help="closed-form (p, sigma) of a generalized complete intersection")
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--m", type=_positive, required=True)
    g.add_argument("--orders", required=True, help="comma-separated equation orders, e.g. 2,2")
    g.add_argument("--d", type=_positive, default=1, help="fiber dimension of the characteristic sheaf")
    _output_flags(g)

    lc = sub.add_parser("lemma-check", help="evaluate the binomial identity for r = n + m - 1 equations")
    lc.add_argument("--n", type=_positive, default=None)
    lc.add_argument("--m", type=_positive, default=None)
    lc.add_argument("--k", type=_positive, default=None)
    lc.add_argument("--sweep", action="store_true",
                    help="check every 1 <= n, m, k up to the given bounds (default 4, 4, 3)")
    _output_flags(lc)
    return parser


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _parse_params(items: Sequence[str]) -> dict[str, int]:
    params = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects K=V, got {item!r}")
        try:
            params[key.strip()] = int(val)
        except ValueError:
            raise UsageError(f"--param {key}: expected an integer, got {val!r}") from None
    return params


def _options(args) -> AnalysisOptions:
    return AnalysisOptions(args.max_degree, args.seed, args.flag_samples, args.limit_basis)


def _run_analysis(system, args) -> int:
    report = analyze(system, _options(args))
    _write(report.to_json() if args.format == "json" else report.to_text(), args.out)
    if not report.ok:
        for c in report.cross_checks:
            if c["status"] == "fail":
                print(f"pdedim: cross-check {c['name']} failed: {c['detail']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_analyze(args) -> int:
    return _run_analysis(parse_system(args.file, args.limit_basis), args)


def _cmd_preset(args) -> int:
    pr = preset(args.name, _parse_params(args.param))
    system = pr.system
    system.limit_basis = args.limit_basis
    if args.emit:
        _write(dumps(system), args.out)
        return EXIT_OK
    return _run_analysis(system, args)


def _cmd_gci(args) -> int:
    try:
        orders = tuple(int(x) for x in args.orders.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--orders expects comma-separated integers, got {args.orders!r}") from None
    if not orders:
        raise UsageError("--orders is empty")
    try:
        prof = GciProfile(args.n, args.m, orders, args.d)
        p, sigma = gci_dimension(prof), gci_rank(prof)
    except (ConditionViolated, ValueError) as exc:
        raise UsageError(str(exc)) from None
    doc = {"n": args.n, "m": args.m, "orders": list(orders), "d": args.d, "r": prof.r, "p": p, "sigma": sigma}
    if args.format == "json":
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _write(f"r = {prof.r}, p = {p}, sigma = {sigma}\n", args.out)
    return EXIT_OK


def _cmd_lemma(args) -> int:
    if args.sweep:
        bounds = (args.n or 4, args.m or 4, args.k or 3)
        cases = [(n, m, k) for n in range(1, bounds[0] + 1) for m in range(1, bounds[1] + 1)
                 for k in range(1, bounds[2] + 1)]
    else:
        if None in (args.n, args.m, args.k):
            raise UsageError("lemma-check needs --n, --m and --k (or --sweep)")
        cases = [(args.n, args.m, args.k)]
    results = []
    for n, m, k in cases:
        lhs, rhs = lemma_sides(n, m, k)
        results.append({"n": n, "m": m, "k": k, "lhs": lhs, "rhs": rhs, "holds": lhs == rhs})
    ok = all(r["holds"] for r in results)
    if args.format == "json":
        _write(json.dumps({"cases": results, "all_hold": ok}, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = [f"n={r['n']} m={r['m']} k={r['k']}: {r['lhs']} {'=' if r['holds'] else '!='} {r['rhs']}"
                 for r in results]
        lines.append(f"{sum(r['holds'] for r in results)}/{len(results)} identities hold")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


_COMMANDS = {"analyze": _cmd_analyze, "preset": _cmd_preset, "gci": _cmd_gci, "lemma-check": _cmd_lemma}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InputError, UsageError, UnknownPreset, PresetParameterError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownPreset) else str(exc)
        print(f"pdedim: input error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except NoStabilization as exc:
        print(f"pdedim: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (GenericityFailure, ResourceLimitExceeded, IncompleteTable, NonIntegerResult) as exc:
        print(f"pdedim: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
