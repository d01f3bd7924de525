"""Command line interface.

Subcommands cover enumeration, exact waits, the independent oracle,
simulation, growth exponents, the Slepian bridge functional, capacity
bounds and filling-scheme sampling.  All machine output is JSON with
sorted keys (rationals rendered as "p/q") so runs diff cleanly.

Exit codes: 0 success, 1 usage error, 2 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .capacity import sandwich
from .exactsolve import SingularMatrixError
from .filling import TARGETS, build_filling_tables, ks_distance, sample_via_filling
from .lattice import (
    Kind,
    PatternClass,
    PatternError,
    count_class,
    enumerate_class,
    load_patterns,
)
from .matching import build_matching_matrix
from .montecarlo import (
    DEFAULT_SEED,
    SimConfig,
    empirical_exponent_table,
    simulate_waiting_time,
    slepian_first_level_bridge,
)
from .waiting import brute_force_oracle, predicted_order, solve_expected_waits

_KINDS = {
    "excursion": Kind.EXCURSION,
    "positive": Kind.POSITIVE,
    "bridge": Kind.BRIDGE,
    "fp": Kind.FIRST_PASSAGE,
    "custom": Kind.CUSTOM,
}


class UsageError(Exception):
    """Missing or inconsistent command line arguments."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit with 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _add_class_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--class", dest="pclass", required=True, choices=sorted(_KINDS))
    p.add_argument("-n", "--length", type=int, help="pattern length")
    p.add_argument("--level", type=float, help="scaled level for bridge/fp")
    p.add_argument("--patterns", help="file of custom patterns, one per line")


def _add_sim_options(p: argparse.ArgumentParser, reps: int) -> None:
    p.add_argument("--reps", type=int, default=reps)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)


def _build_collection(args: argparse.Namespace):
    kind = _KINDS[args.pclass]
    if kind is Kind.CUSTOM:
        if not args.patterns:
            raise UsageError("--patterns is required for the custom class")
        with open(args.patterns) as fh:
            return load_patterns(fh)
    if args.length is None:
        raise UsageError("-n/--length is required for built-in classes")
    pc = PatternClass(kind, args.length, level=args.level)
    return enumerate_class(pc)


def _sim_config(args: argparse.Namespace) -> SimConfig:
    return SimConfig(
        seed=args.seed,
        replications=args.reps,
        max_steps=args.max_steps,
        workers=args.workers,
    )


def _cmd_enumerate(args) -> None:
    coll = _build_collection(args)
    if args.json:
        _emit({"collection": coll.label(), "k": len(coll), "n": coll.n,
               "patterns": [p.to_string() for p in coll.paths]})
    else:
        for p in coll.paths:
            print(p.to_string())


def _cmd_count(args) -> None:
    kind = _KINDS[args.pclass]
    if kind is Kind.CUSTOM:
        coll = _build_collection(args)
        _emit({"collection": coll.label(), "count": len(coll)})
        return
    if args.length is None:
        raise UsageError("-n/--length is required for built-in classes")
    pc = PatternClass(kind, args.length, level=args.level)
    _emit({"collection": pc.label(), "count": count_class(pc)})


def _cmd_matrix(args) -> None:
    coll = _build_collection(args)
    mm = build_matching_matrix(coll)
    if args.format == "json":
        print(json.dumps(mm.to_json_obj(), sort_keys=True))
    else:
        mm.to_csv(sys.stdout)


def _cmd_wait(args) -> None:
    coll = _build_collection(args)
    kind = _KINDS[args.pclass]
    pc = coll.pclass if kind is not Kind.CUSTOM else None
    report = solve_expected_waits(build_matching_matrix(coll), pc)
    out = {
        "collection": report.collection_ref,
        "n": report.n,
        "k": len(report.per_pattern),
        "collection_wait": _frac(report.collection),
        "collection_wait_float": report.collection_float,
    }
    if not args.summary:
        out["per_pattern"] = [_frac(f) for f in report.per_pattern]
    if pc is not None:
        order, _ = predicted_order(pc)
        out["predicted_order"] = order
        if report.asymptotic_ratio is not None:
            out["asymptotic_ratio"] = report.asymptotic_ratio
    _emit(out)


def _cmd_oracle(args) -> None:
    coll = _build_collection(args)
    wait = brute_force_oracle(coll)
    out = {
        "collection": coll.label(),
        "oracle_wait": _frac(wait),
        "oracle_wait_float": float(wait),
    }
    if args.compare:
        report = solve_expected_waits(build_matching_matrix(coll))
        out["matrix_wait"] = _frac(report.collection)
        out["agree"] = report.collection == wait
    _emit(out)


def _cmd_simulate(args) -> None:
    coll = _build_collection(args)
    res = simulate_waiting_time(coll.pclass, _sim_config(args))
    _emit({
        "collection": coll.label(),
        "mean_wait": res.mean_wait,
        "std_error": res.std_error,
        "replications": res.replications_completed,
        "censored": res.censored,
        "biased": res.biased,
    })


def _cmd_exponent(args) -> None:
    kind = _KINDS[args.pclass]
    if kind is Kind.CUSTOM:
        raise PatternError("exponent tables need a built-in class")
    grid = [int(x) for x in args.grid.split(",")]
    table = empirical_exponent_table(kind, grid, _sim_config(args), level=args.level)
    _emit({
        "class": args.pclass,
        "rows": [
            {"n": r.n, "mean_wait": r.mean_wait, "std_error": r.std_error,
             "censored": r.censored}
            for r in table.rows
        ],
        "zeta": list(table.zeta),
    })


def _cmd_slepian(args) -> None:
    res = slepian_first_level_bridge(args.length, _sim_config(args))
    _emit({
        "n": res.n,
        "mean_f_over_n": res.mean_f_over_n,
        "se_f_over_n": res.se_f_over_n,
        "mean_wait_over_n": res.mean_wait_over_n,
        "prob_f_zero": res.prob_f_zero,
        "cdf": [{"x": x, "p": p} for x, p in res.cdf_points],
        "censored": res.censored,
    })


def _cmd_capacity(args) -> None:
    coll = _build_collection(args)
    rep = sandwich(
        coll,
        args.alpha,
        with_exact=not args.no_exact,
        mc_replications=args.mc_reps,
        seed=args.seed,
    )
    out = {
        "collection": rep.collection_ref,
        "alpha": rep.alpha,
        "lower": rep.lower,
        "upper": rep.upper,
    }
    if rep.exact is not None:
        out["exact"] = rep.exact
        out["within_bounds"] = rep.exact_within_bounds()
    if rep.mc_estimate is not None:
        out["mc_estimate"] = rep.mc_estimate
        out["mc_std_error"] = rep.mc_std_error
    _emit(out)


def _cmd_fill_sample(args) -> None:
    tables = build_filling_tables(args.target, residual=args.residual)
    res = sample_via_filling(args.target, args.m, args.count, seed=args.seed, tables=tables)
    out = {
        "target": res.target,
        "m": res.m,
        "count": len(res.endpoints),
        "mean_endpoint": float(res.endpoints.mean()),
        "mean_depth": float(res.depths.mean()),
        "max_depth": int(res.depths.max()),
        "restarts": res.restarts,
        "meanders_used": res.meanders_used,
        "table_depth": tables.depth,
    }
    if args.ks:
        out["ks_distance"] = ks_distance(res.endpoints, args.target, m=args.m, seed=args.seed)
    if args.endpoints:
        np.savetxt(args.endpoints, res.endpoints)
        out["endpoints_file"] = args.endpoints
    _emit(out)


def build_parser() -> _Parser:
    parser = _Parser(prog="walkpatterns", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list the patterns of a class")
    _add_class_options(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("count", help="closed-form class size")
    _add_class_options(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("matrix", help="matching matrix as CSV or JSON")
    _add_class_options(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("wait", help="exact expected waiting times")
    _add_class_options(p)
    p.add_argument("--summary", action="store_true", help="omit per-pattern waits")
    p.set_defaults(func=_cmd_wait)

    p = sub.add_parser("oracle", help="absorbing-chain cross-check")
    _add_class_options(p)
    p.add_argument("--compare", action="store_true", help="also solve the matrix")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("simulate", help="Monte Carlo waiting time")
    _add_class_options(p)
    _add_sim_options(p, reps=10_000)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("exponent", help="empirical growth exponents over an n-grid")
    _add_class_options(p)
    p.add_argument("--grid", required=True, help="comma-separated n values")
    _add_sim_options(p, reps=2_000)
    p.set_defaults(func=_cmd_exponent)

    p = sub.add_parser("slepian", help="first level bridge functional F_n/n")
    p.add_argument("-n", "--length", type=int, required=True)
    _add_sim_options(p, reps=5_000)
    p.set_defaults(func=_cmd_slepian)

    p = sub.add_parser("capacity", help="capacity sandwich on hitting probability")
    _add_class_options(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--mc-reps", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("fill-sample", help="filling-scheme endpoint resampling")
    p.add_argument("--target", required=True, choices=TARGETS)
    p.add_argument("-m", type=int, required=True, help="meander steps")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--residual", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--ks", action="store_true", help="report KS distance to target")
    p.add_argument("--endpoints", help="write endpoints to this file")
    p.set_defaults(func=_cmd_fill_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as err:
        print(f"walkpatterns: {err}", file=sys.stderr)
        return 1
    except (PatternError, SingularMatrixError, OSError) as err:
        print(f"walkpatterns: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
