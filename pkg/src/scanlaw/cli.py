"""``scanlaw`` command-line front end.

Every report is a JSON object with the schema version, package version,
resolved configuration, seed and distribution record, so rerunning the
recorded command reproduces it byte for byte.  Exit codes: 0 success,
1 computational error, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cgf import classify, duality_report, psi_profile, rate
from .distributions import make_distribution
from .errors import ArgumentError, RateInfinite, SchemaError, ScanlawError
from .harness import argmax_length_profile, run_hitting_experiment, run_mn_experiment
from .laws import (
    gumbel_law,
    hitting_cdf,
    hitting_threshold,
    intensity,
    optimal_length,
    pvalue_m,
)
from .pickands import hstar_direct, hstar_spitzer, reconcile, tilt
from .scan import read_data, scan_restricted, scan_two_sided
from .tails import (
    TailQuery,
    bahadur_rao_tail,
    chernoff_bound,
    cramer_tail,
    exact_tail,
    importance_tail,
)

SCHEMA_VERSION = 1
USAGE_EXIT = 2
COMPUTE_EXIT = 1
# options that never change a report's content
NON_SEMANTIC = {"threads", "out", "plot", "func", "dist", "dist_file"}


def _json_safe(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def _dump(report: dict) -> str:
    return json.dumps(_json_safe(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def _load_dist(args, required: bool = True):
    if args.dist and args.dist_file:
        raise ArgumentError("give either --dist or --dist-file, not both")
    if args.dist_file:
        try:
            text = Path(args.dist_file).read_text(encoding="utf-8")
        except OSError as exc:
            raise ArgumentError(f"cannot read {args.dist_file}: {exc}") from None
        return make_distribution(text)
    if args.dist:
        return make_distribution(args.dist)
    if required:
        raise ArgumentError("this command needs --dist or --dist-file")
    return None


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ArgumentError(f"--{name.replace('_', '-')} is required for '{args.command}'")


def _case_with_hstar(dist, args):
    """Classify and, in the logarithmic case, attach H* (given or computed)."""
    case = classify(dist)
    extra = None
    if case.case == "logarithmic":
        if args.hstar is not None:
            case = case.with_hstar(args.hstar)
            extra = {"source": "given", "value": args.hstar}
        else:
            est = hstar_spitzer(tilt(dist, case.t_star), args.K, reps=args.hstar_reps, seed=args.seed)
            case = case.with_hstar(est.value)
            extra = est.to_json()
            extra["source"] = "spitzer"
    return case, extra


# ---------------------------------------------------------------- commands


def cmd_classify(args, dist):
    case = classify(dist)
    out = {"case_report": case.to_json()}
    if case.case == "logarithmic":
        out["duality"] = duality_report(dist, case).to_json()
    if args.plot:
        prof = psi_profile(dist)
        _write_csv(args.plot, ["t", "psi"], zip(prof.grid, prof.values))
    return out


def cmd_constants(args, dist):
    case, hinfo = _case_with_hstar(dist, args)
    out = {"case_report": case.to_json(), "h_star_estimate": hinfo}
    if args.n is not None and case.case in ("superlogarithmic", "logarithmic"):
        out["gumbel_law"] = gumbel_law(case, args.n).to_json()
    if args.n is not None and case.case != "indeterminate":
        out["optimal_length"] = optimal_length(case, args.n)
    if args.plot and case.case in ("superlogarithmic", "logarithmic"):
        if case.case == "superlogarithmic":
            grid = np.linspace(case.a_star / 20, case.a_star * 20, 400)
        else:
            grid = np.linspace(-4 / case.beta_star, 4 / case.beta_star, 401)
        _write_csv(args.plot, ["a", "intensity"], zip(grid, intensity(case, grid)))
    return out


def cmd_rate(args, dist):
    if args.s:
        levels = list(args.s)
    elif args.grid:
        lo, hi, count = args.grid
        levels = list(np.linspace(lo, hi, int(count)))
    else:
        raise ArgumentError("rate needs --s or --grid")
    rows = []
    for s in levels:
        try:
            ev = rate(dist, float(s))
            rows.append({"s": float(s), "rate": ev.value, "maximizer": ev.maximizer})
        except RateInfinite:
            rows.append({"s": float(s), "rate": math.inf, "maximizer": None})
    if args.plot:
        _write_csv(args.plot, ["s", "rate"], [(r["s"], r["rate"]) for r in rows])
    return {"rates": rows}


def cmd_tail(args, dist):
    _require(args, "k", "x")
    query = TailQuery(args.k, args.x)
    methods = ["cramer", "series", "bahadur_rao", "chernoff", "exact", "importance"] if args.method == "all" else [args.method]
    out = {}
    for m in methods:
        try:
            if m == "cramer":
                out[m] = cramer_tail(dist, query, "mills").to_json()
            elif m == "series":
                out[m] = cramer_tail(dist, query, "series").to_json()
            elif m == "bahadur_rao":
                out[m] = bahadur_rao_tail(dist, query).to_json()
            elif m == "chernoff":
                out[m] = {"value": chernoff_bound(dist, query), "method": "chernoff"}
            elif m == "exact":
                out[m] = {"value": exact_tail(dist, query), "method": "exact"}
            else:
                mean, se = importance_tail(dist, query, args.draws, args.seed)
                out[m] = {"value": mean, "stderr": se, "method": "importance", "draws": args.draws}
        except ScanlawError as exc:
            if args.method != "all":
                raise
            out[m] = {"error": {"code": exc.code, "message": str(exc)}}
    return {"k": args.k, "x": args.x, "tails": out}


def _b_schedule(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ArgumentError(f"--B-schedule must be comma-separated integers, got {text!r}") from None


def cmd_pickands(args, dist):
    if args.t is None:
        case = classify(dist)
        if case.case != "logarithmic":
            raise ArgumentError(f"{case.case} law has no t*; pass --t explicitly")
        t = case.t_star
    else:
        t = args.t
    tw = tilt(dist, t)
    reps = 20000 if args.reps is None else args.reps
    out = {"t": t, "walk": tw.to_json()}
    direct = spitzer = None
    if args.method in ("direct", "both"):
        direct = hstar_direct(tw, _b_schedule(args.B_schedule), reps, args.seed)
        out["direct"] = direct.to_json()
        if args.plot:
            _write_csv(
                args.plot,
                ["B", "value", "stderr"],
                [(r["B"], r["value"], r["stderr"]) for r in direct.diagnostics["per_B"]],
            )
    if args.method in ("spitzer", "both"):
        spitzer = hstar_spitzer(tw, args.K, reps=reps, seed=args.seed, precision=args.precision)
        out["spitzer"] = spitzer.to_json()
    if direct is not None and spitzer is not None:
        out["reconciliation"] = reconcile(direct, spitzer)
    return out


def cmd_scan(args, dist):
    _require(args, "data")
    x = read_data(args.data)
    h1 = args.h1
    h2 = len(x) if args.h2 is None else args.h2
    if args.two_sided:
        plus, minus = scan_two_sided(x, h1, h2, args.threads)
        return {"n": len(x), "plus": plus.to_json(), "minus": minus.to_json(), "abs_value": max(plus.value, minus.value)}
    return {"n": len(x), "scan": scan_restricted(x, h1, h2, args.threads).to_json()}


def _window_policy(text: str):
    if text in ("full", "theory"):
        return text
    try:
        h1, h2 = (int(v) for v in text.split(","))
    except ValueError:
        raise ArgumentError(f"--window must be full, theory or H1,H2; got {text!r}") from None
    return (h1, h2)


def cmd_simulate(args, dist):
    _require(args, "n", "reps")
    case, hinfo = _case_with_hstar(dist, args)
    summary = run_mn_experiment(dist, case, args.n, args.reps, _window_policy(args.window), args.seed, args.threads)
    out = {"case_report": case.to_json(), "h_star_estimate": hinfo}
    out["summary"] = summary.to_json(include_samples=args.samples)
    if case.case in ("superlogarithmic", "logarithmic"):
        out["length_profile"] = argmax_length_profile(summary, case)
    if args.plot:
        summary.write_csv(args.plot)
    return out


def cmd_pvalue(args, dist):
    _require(args, "m", "n")
    case, hinfo = _case_with_hstar(dist, args)
    return {
        "case_report": case.to_json(),
        "h_star_estimate": hinfo,
        "m": args.m,
        "n": args.n,
        "form": args.form,
        "pvalue": pvalue_m(args.m, case, args.n, args.form),
        "law": gumbel_law(case, args.n).to_json(),
    }


def cmd_hitting(args, dist):
    case, hinfo = _case_with_hstar(dist, args)
    if args.u is None:
        _require(args, "level")
        u = hitting_threshold(case, args.level)
    else:
        u = args.u
    reps = args.reps or 1
    summary = run_hitting_experiment(dist, case, u, reps, args.seed, args.n_cap, args.window_cap, args.threads)
    out = {"case_report": case.to_json(), "h_star_estimate": hinfo, "hitting": summary.to_json()}
    out["limit"] = hitting_cdf(1.0, u, case)
    if args.plot:
        _write_csv(args.plot, ["time"], [(t,) for t in summary.times if t is not None])
    return out


COMMANDS = {
    "classify": (cmd_classify, "classify the tail regime and report its constants", True),
    "constants": (cmd_constants, "all limit-law constants, estimating H* when needed", True),
    "rate": (cmd_rate, "Legendre rate function I(s)", True),
    "tail": (cmd_tail, "tail approximations for P[S_k/sqrt(k) > x]", True),
    "pickands": (cmd_pickands, "Pickands-type constant H* by direct and Spitzer estimators", True),
    "scan": (cmd_scan, "exact scan statistic of observed data", False),
    "simulate": (cmd_simulate, "Monte Carlo scan statistics against the limit law", True),
    "pvalue": (cmd_pvalue, "asymptotic p-value of an observed scan value", True),
    "hitting": (cmd_hitting, "first-passage times of the scan statistic", True),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common options")
    g.add_argument("--dist", help="distribution as JSON, e.g. '{\"family\":\"bernoulli\",\"params\":{\"p\":0.3}}'")
    g.add_argument("--dist-file", help="path to a JSON distribution record")
    g.add_argument("--data", help="one-column CSV or newline-delimited floats")
    g.add_argument("--n", type=int, help="walk length")
    g.add_argument("--reps", type=int, help="Monte Carlo replicates")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--out", help="write the JSON report here instead of stdout")
    g.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SCANLAW_THREADS", "1")),
        help="worker cap; never changes results (default $SCANLAW_THREADS or 1)",
    )
    g.add_argument("--plot", help="also write plot data as CSV to this path")


def _add_hstar_opts(p):
    p.add_argument("--hstar", type=float, help="use this H* instead of estimating it (logarithmic case)")
    p.add_argument("--K", type=int, default=200, help="Spitzer series length for H* (default 200)")
    p.add_argument("--hstar-reps", type=int, default=20000, help="Monte Carlo replicates for H* of nonlattice laws")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scanlaw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"scanlaw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    ps = {}
    for name, (func, help_text, _) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_common(p)
        p.set_defaults(func=func)
        ps[name] = p
    for name in ("constants", "simulate", "pvalue", "hitting"):
        _add_hstar_opts(ps[name])
    p = ps["rate"]
    p.add_argument("--s", type=float, action="append", help="level s (repeatable)")
    p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "COUNT"), help="evenly spaced levels")
    p = ps["tail"]
    p.add_argument("--k", type=int, help="number of summands")
    p.add_argument("--x", type=float, help="threshold on the S_k/sqrt(k) scale")
    p.add_argument(
        "--method",
        default="all",
        choices=["cramer", "series", "bahadur_rao", "chernoff", "exact", "importance", "all"],
        help="tail method (default all)",
    )
    p.add_argument("--draws", type=int, default=200000, help="importance-sampling draws")
    p = ps["pickands"]
    p.add_argument("--method", default="both", choices=["direct", "spitzer", "both"], help="estimator (default both)")
    p.add_argument("--t", type=float, help="tilt parameter (default: t* of the law)")
    p.add_argument("--K", type=int, default=200, help="Spitzer series length (default 200)")
    p.add_argument(
        "--B-schedule",
        dest="B_schedule",
        default="64,128,256,512,1024,2048,4096",
        help="comma-separated horizons for the direct estimator",
    )
    p.add_argument("--precision", type=float, default=1e-6, help="Spitzer truncation tolerance")
    p = ps["scan"]
    p.add_argument("--h1", type=int, default=1, help="shortest interval length (default 1)")
    p.add_argument("--h2", type=int, help="longest interval length (default n)")
    p.add_argument("--two-sided", action="store_true", help="also scan the negated data")
    p = ps["simulate"]
    p.add_argument("--window", default="theory", help="full | theory | H1,H2 (default theory)")
    p.add_argument("--samples", action="store_true", help="embed per-replicate values and lengths")
    p = ps["pvalue"]
    p.add_argument("--m", type=float, help="observed scan value M_n")
    p.add_argument("--form", default="square", choices=["square", "linear"], help="normalization form")
    p = ps["hitting"]
    p.add_argument("--u", type=float, help="threshold u")
    p.add_argument("--level", type=float, help="choose u with exp(u^2/(2 m*)) = LEVEL")
    p.add_argument("--n-cap", dest="n_cap", type=int, default=10**6, help="give up after this many steps")
    p.add_argument("--window-cap", dest="window_cap", type=int, help="only examine intervals up to this length")
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in NON_SEMANTIC}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    report = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "seed": args.seed,
    }
    _, _, needs_dist = COMMANDS[args.command]
    try:
        if args.threads < 1:
            raise ArgumentError("--threads must be >= 1")
        dist = _load_dist(args, required=needs_dist)
        report["dist"] = None if dist is None else dist.to_json()
        report["result"] = args.func(args, dist)
    except ScanlawError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        _emit(_dump(report), args.out)
        print(f"scanlaw {args.command}: {exc.code}: {exc}", file=sys.stderr)
        return USAGE_EXIT if isinstance(exc, (ArgumentError, SchemaError)) else COMPUTE_EXIT
    _emit(_dump(report), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
