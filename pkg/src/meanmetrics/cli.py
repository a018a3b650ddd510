"""Command-line entry point: ``meanmetrics <subcommand> [options]``.

Exit status is 0 when the run passes, 2 when a checked statement fails
(the report's ``pass`` field is false) and 1 on usage or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import bounds, distortion, harness
from .geometry import Domain
from .means import MeanKind
from .metrics import MetricForm, MetricSpec
from .report import build_report, emit_report

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 42
DEFAULT_GRID = 1024
# Per-axis points for the three-parameter disk quotients.
DEFAULT_GRID_3D = 128

_SKIP_CONFIG = {"func", "output", "format", "verbose"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        value = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _spec(args) -> MetricSpec:
    d = args.d if args.mean == "power" else None
    return MetricSpec(MeanKind(args.mean, d), args.c, MetricForm(args.form))


def _domain(args) -> Domain:
    return Domain.parse(args.domain, args.dim)


# ---------------------------------------------------------------- handlers


def cmd_check_axioms(args):
    rep = harness.sample_axiom_check(_spec(args), _domain(args), args.samples, args.seed, args.threads)
    res = rep.as_dict()
    if args.expect == "metric":
        passed = rep.passed_as_metric
    else:
        passed = rep.violations > 0
    return res, [res["witness"]] if rep.witness is not None else [], passed, None


def cmd_reproduce(args):
    rec = harness.reproduce_counterexample(args.lemma, args.c, args.param)
    res = rec.as_dict()
    return res, [res["points"]], rec.passed, None


def cmd_search(args):
    out = harness.search_counterexample(_spec(args), _domain(args), args.budget, args.seed)
    res = out.as_dict()
    passed = out.found if args.expect == "witness" else not out.found
    return res, [res["witness"]] if out.found else [], passed, None


def cmd_explore(args):
    domains = [Domain.parse(d, args.dim) for d in args.domains.split(",")]
    cells = harness.explore_conjecture(args.conjecture, args.c_grid, args.d_grid, args.samples,
                                       args.seed, domains, args.threads)
    rows = [cell.row() for cell in cells]
    th_ok = all(cell.report.violations == 0 for cell in cells if cell.expected_metric)
    witnesses = [cell.report.as_dict()["witness"] for cell in cells if cell.report.witness is not None]
    results = {"cells": rows,
               "th_cells_violation_free": th_ok,
               "non_metric_cells_with_violations": sum(
                   1 for cell in cells if not cell.expected_metric and cell.report.violations > 0)}
    return results, witnesses, th_ok, rows


def cmd_bounds(args):
    theorems = list(bounds.THEOREMS) if args.theorem == "all" else [args.theorem]
    c_values = args.c_grid if args.c_grid else [args.c]
    rows = []
    for th in theorems:
        for c in c_values:
            rep = bounds.verify_theorem_bounds(th, c, args.tol, args.grid, not args.no_refine)
            rows.append(rep.as_dict())
    passed = all(r["tolerance_met"] for r in rows)
    results = rows[0] if len(rows) == 1 else {"reports": rows}
    return results, [], passed, rows


def cmd_compare(args):
    domain = _domain(args)
    count = bounds.comparison_check(domain, args.c, args.samples, args.seed)
    res = {"domain": str(domain), "c": args.c, "pairs": args.samples, "violations": count}
    return res, [], count == 0, None


def _qr_map(args):
    if args.map == "mobius":
        return distortion.MobiusBall(complex(*args.a))
    if args.map == "power":
        return distortion.AnalyticPowerBall(args.m)
    if args.map == "vstretch":
        return distortion.VerticalStretchHalf(args.K)
    return distortion.RadialStretchBall(args.K)


def cmd_distort(args):
    qr = _qr_map(args)
    sch = distortion.schwarz_check(qr, args.pairs, args.seed)
    rows = []
    for fam in distortion.FAMILIES if args.family == "both" else [args.family]:
        rows.append(distortion.corollary_check(qr, args.c, fam, args.pairs, args.seed))
    res = {"map": repr(qr), "K": qr.K, "schwarz": sch.as_dict(), "corollary": rows}
    passed = sch.holds_1 and sch.holds_2 and all(r["holds"] for r in rows)
    return res, [], passed, rows


def cmd_sweep(args):
    rows = list(bounds.quotient_grid(args.quotient, args.c, args.grid))
    res = {"quotient": args.quotient, "c": args.c, "grid": args.grid, "cells": len(rows)}
    return res, [], True, rows


# ---------------------------------------------------------------- parser


def _add_common(p, samples=True):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if samples:
        p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    p.add_argument("--output", "-o", default="-", help="report path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--verbose", "-v", action="store_true")


def _add_metric(p):
    p.add_argument("--domain", default="ball", help="half | ball | punctured")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--mean", default="arithmetic",
                   choices=("arithmetic", "power", "logarithmic", "min", "max", "geometric"))
    p.add_argument("--d", type=_positive_float, default=1.0, help="power-mean exponent")
    p.add_argument("--form", default="th", choices=[f.value for f in MetricForm])
    p.add_argument("--c", type=_positive_float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meanmetrics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check-axioms", help="random triangle-inequality sweep")
    _add_metric(p)
    _add_common(p)
    p.add_argument("--expect", choices=("metric", "non-metric"), default="metric")
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("reproduce", help="evaluate a non-metricity counterexample")
    p.add_argument("--lemma", required=True, choices=harness.LEMMAS)
    p.add_argument("--c", type=_positive_float, default=1.0)
    p.add_argument("--param", type=float, default=None, help="k (or h for L3.3)")
    _add_common(p, samples=False)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("search", help="search for a triangle-inequality witness")
    _add_metric(p)
    _add_common(p, samples=False)
    p.add_argument("--budget", type=_positive_int, default=1_000_000)
    p.add_argument("--expect", choices=("witness", "none"), default="witness")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("explore", help="sample a conjecture's parameter grid")
    p.add_argument("--conjecture", required=True, choices=harness.CONJECTURES)
    p.add_argument("--c-grid", type=_floats, default=[0.25, 1.0, 4.0])
    p.add_argument("--d-grid", type=_floats, default=[0.5, 1.0, 3.0])
    p.add_argument("--domains", default="half,ball")
    p.add_argument("--dim", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("bounds", help="extremum search for the comparison constants")
    p.add_argument("--theorem", required=True, choices=(*bounds.THEOREMS, "all"))
    p.add_argument("--c", type=_positive_float, default=1.0)
    p.add_argument("--c-grid", type=_floats, default=None)
    p.add_argument("--tol", type=_positive_float, default=5e-3)
    p.add_argument("--grid", type=_positive_int, default=None,
                   help=f"points per axis (default {DEFAULT_GRID}, {DEFAULT_GRID_3D} for disk quotients)")
    p.add_argument("--no-refine", action="store_true")
    _add_common(p, samples=False)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("compare", help="logarithmic vs arithmetic th-form comparison")
    p.add_argument("--domain", default="ball")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--c", type=_positive_float, default=1.0)
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("distort", help="Schwarz-type distortion checks")
    p.add_argument("--map", required=True, choices=("mobius", "power", "vstretch", "radial"))
    p.add_argument("--a", type=_floats, default=[0.0, 0.0], help="Mobius parameter as re,im")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--K", type=float, default=2.0)
    p.add_argument("--c", type=_positive_float, default=1.0)
    p.add_argument("--family", choices=(*distortion.FAMILIES, "both"), default="both")
    p.add_argument("--pairs", type=_positive_int, default=10_000)
    _add_common(p, samples=False)
    p.set_defaults(func=cmd_distort)

    p = sub.add_parser("sweep", help="dump a quotient grid as CSV")
    p.add_argument("--quotient", required=True, choices=tuple(bounds.QUOTIENTS))
    p.add_argument("--c", type=_positive_float, default=1.0)
    p.add_argument("--grid", type=_positive_int, default=64)
    _add_common(p, samples=False)
    p.set_defaults(func=cmd_sweep, format="csv")

    p = sub.add_parser("replay", help="re-run the configuration stored in a JSON report")
    p.add_argument("report")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=None)
    return parser


def config_to_argv(subcommand: str, config: dict) -> list[str]:
    """Command line equivalent to a stored report configuration."""
    argv = [subcommand]
    for key, value in config.items():
        if value is None or value is False or key == "subcommand":
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv += [flag, ",".join(repr(float(v)) for v in value)]
        else:
            argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


def execute(args) -> tuple[dict, list | None]:
    config = {k: v for k, v in vars(args).items() if k not in _SKIP_CONFIG}
    results, witnesses, passed, rows = args.func(args)
    return build_report(args.subcommand, config, results, witnesses, passed), rows


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "replay":
            with open(args.report, encoding="utf-8") as fh:
                stored = json.load(fh)
            replayed = parser.parse_args(config_to_argv(stored["subcommand"], stored["config"]))
            replayed.output, replayed.format, replayed.verbose = args.output, args.format, args.verbose
            args = replayed
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError) as exc:
        print(f"meanmetrics: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report, rows = execute(args)
    except ValueError as exc:
        print(f"meanmetrics {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit_report(report, args.format, args.output, rows if args.format == "csv" else None)
    except OSError as exc:
        print(f"meanmetrics: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report["pass"] else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
