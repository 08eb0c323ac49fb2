"""Command line front end.

Every command writes one artifact (CSV or JSON) to ``--out`` or stdout.  With
``--out`` a manifest ``<out>.manifest.json`` records the tool version, seed,
tolerances and a digest of the full configuration.  Exit status: 0 when all
checks pass, 1 when a check fails, 2 for bad input, 3 for numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import DensitySpecError, load_density
from .config import ENV_VAR, Tolerances
from .confidence import EmpiricalSample, SearchConfig, coverage_simulation, moment_confidence_interval
from .convergence import SEQUENCES, CompactSet, SublinearFn, convergence_report, make_sequence
from .density import PiecewiseLogLinearDensity
from .errors import (
    DegenerateSimplexError,
    DimensionError,
    DivergenceError,
    InfeasibleError,
    NonIntegrableError,
    NotLogConcaveError,
    PreconditionError,
    QuadratureError,
    VerificationError,
)
from .inequalities import SUITE_CHECKS, BoundReport, check_envelope, exp_tail_constants, random_simplex, run_lemma_suite
from .polynomial import Polynomial
from .simplex import Simplex
from .univariate import check_hazard_monotone, hazard_grid, moment_bound

REPORT_COLUMNS = ["name", "lhs", "rhs", "margin", "pass", "error_bound", "seed"]
COLUMNS_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

_INPUT_ERRORS = (DensitySpecError, PreconditionError, DimensionError, DegenerateSimplexError, NotLogConcaveError,
                 NonIntegrableError, FileNotFoundError)
_NUMERIC_ERRORS = (QuadratureError, VerificationError, InfeasibleError, DivergenceError, FloatingPointError)


class InputError(ValueError):
    """Bad command line input; maps to exit status 2."""


# -- helpers ----------------------------------------------------------------


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _json_default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _density_1d(spec: str):
    f = load_density(spec)
    if getattr(f, "dim", 1) != 1:
        raise InputError(f"{spec}: this command needs a one-dimensional density")
    return f


def _poly(text: str) -> Polynomial:
    try:
        return Polynomial.parse(text, dim=1)
    except Exception as exc:  # sympy raises a variety of parse errors
        raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def read_samples(path: str) -> np.ndarray:
    """First column of a CSV file; a non-numeric first line is treated as a header."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"data file not found: {path}")
    values = []
    with p.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                if lineno == 1:
                    continue
                raise InputError(f"{path}: line {lineno}: not a number: {row[0]!r}") from None
    if not values:
        raise InputError(f"{path}: no data values")
    x = np.array(values)
    if not np.all(np.isfinite(x)):
        raise InputError(f"{path}: data must be finite")
    return x


# -- commands ---------------------------------------------------------------
# Each returns (artifact dict with "columns"/"rows" or "json", all_passed).


def cmd_check(args, tol):
    f = load_density(args.density)
    checks = SUITE_CHECKS if args.suite == "all" else tuple(args.suite.split(","))
    unknown = set(checks) - set(SUITE_CHECKS)
    if unknown:
        raise InputError(f"unknown checks {sorted(unknown)}; choose from {', '.join(SUITE_CHECKS)} or 'all'")
    reports = run_lemma_suite(f, args.trials, seed=args.seed, checks=checks, n_envelope_points=args.points, tol=tol.check)
    rows = [[r.as_row()[c] for c in REPORT_COLUMNS] for r in reports]
    return {"columns": REPORT_COLUMNS, "rows": rows, "json": [r.to_dict() for r in reports]}, all(r.passed for r in reports)


def cmd_envelope(args, tol):
    f = load_density(args.density)
    rng = np.random.default_rng(args.seed)
    if args.simplex:
        try:
            s = Simplex.from_dict(json.loads(args.simplex))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"--simplex: {exc}") from exc
    else:
        s = random_simplex(f, rng)
    rep = check_envelope(f, s, n_points=args.points, seed=args.seed, tol=tol.check)
    tc = exp_tail_constants(f)
    tail = BoundReport("tail_envelope", tc.grid_max_ratio, 1.0, 0.0, tol.check, args.seed, {"C1": tc.C1, "C2": tc.C2})
    reports = [rep, tail]
    rows = [[r.as_row()[c] for c in REPORT_COLUMNS] for r in reports]
    extra = {"simplex": s.to_dict(), "C1": tc.C1, "C2": tc.C2, "origin": tc.origin}
    return {"columns": REPORT_COLUMNS, "rows": rows, "json": {"reports": [r.to_dict() for r in reports], **extra}}, all(
        r.passed for r in reports)


def cmd_hazard(args, tol):
    f = _density_1d(args.density)
    grid = hazard_grid(f, n=args.grid)
    viol = check_hazard_monotone(f, grid, slack=tol.hazard_slack)
    cols = ["kind", "x0", "x1", "change"]
    rows = [[v.kind, v.x0, v.x1, v.change] for v in viol]
    return {"columns": cols, "rows": rows, "json": {"grid_size": int(grid.size), "violations": [dict(zip(cols, r)) for r in rows]}}, not viol


def cmd_moment_bound(args, tol):
    f = _density_1d(args.density)
    if not isinstance(f, PiecewiseLogLinearDensity):
        raise InputError("moment-bound needs a piecewise log-linear density")
    reports = []
    equal = []
    for x0 in _floats(args.x0, "--x0"):
        rep, eq = moment_bound(f, x0, tol=tol.equality_rel)
        reports.append(rep)
        equal.append(eq)
    cols = REPORT_COLUMNS + ["x_o", "equality"]
    rows = [[r.as_row()[c] for c in REPORT_COLUMNS] + [r.inputs["x_o"], e] for r, e in zip(reports, equal)]
    js = [dict(r.to_dict(), equality=e) for r, e in zip(reports, equal)]
    return {"columns": cols, "rows": rows, "json": js}, all(r.passed for r in reports)


def cmd_converge(args, tol):
    n_values = [int(v) for v in _floats(args.n, "--n")]
    if not n_values or min(n_values) < 1:
        raise InputError("--n needs positive integers")
    seq, limit = make_sequence(args.sequence, n_values)
    polys = [_poly(p) for p in (args.poly or [])]
    thetas = _floats(args.theta, "--theta") if args.theta else []
    A = SublinearFn(args.weight_theta, args.weight_eps) if args.weight_eps is not None else None
    S = CompactSet([tuple(_floats(args.sup_interval, "--sup-interval"))]) if args.sup_interval else None
    rep = convergence_report(seq, limit, polys, thetas, A, S, n_values, cap=tol.divergence_cap)
    div = [{"theta": w.theta, "diverged": w.diverged, "cap": w.cap, "radii": w.radii, "values": w.values} for w in rep.divergence]
    js = {"columns": rep.columns, "rows": rep.rows, "limit_values": rep.limit_values, "divergence": div}
    return {"columns": rep.columns, "rows": rep.rows, "json": js}, True


def _search_cfg(args) -> SearchConfig:
    return SearchConfig(max_knots=args.max_knots)


def cmd_confint(args, tol):
    x = read_samples(args.data)
    res = moment_confidence_interval(EmpiricalSample(x), _poly(args.poly), args.alpha, _search_cfg(args))
    cols = ["alpha", "radius", "lo", "hi", "fit_moment", "n"]
    rows = [[res.alpha, res.radius, res.interval[0], res.interval[1], res.fit_moment, res.n]]
    return {"columns": cols, "rows": rows, "json": dict(res.to_dict(), poly=str(_poly(args.poly)))}, True


def cmd_coverage(args, tol):
    truth = _density_1d(args.truth)
    res = coverage_simulation(truth, _poly(args.poly), args.alpha, args.n, args.reps, args.seed, _search_cfg(args),
                              workers=args.workers)
    cols = ["rep", "lo", "hi", "covers"]
    tv = res.truth_value
    rows = [[i, lo, hi, bool(lo <= tv <= hi)] for i, (lo, hi) in enumerate(res.intervals)]
    js = {"coverage": res.coverage, "truth_value": tv, "n_infeasible": res.n_infeasible, "intervals": res.intervals}
    return {"columns": cols, "rows": rows, "json": js}, True


def cmd_sample(args, tol):
    f = load_density(args.density)
    x = np.asarray(f.sample(args.n, np.random.default_rng(args.seed)), dtype=float)
    x = x.reshape(args.n, -1)
    cols = ["x"] if x.shape[1] == 1 else [f"x{i + 1}" for i in range(x.shape[1])]
    return {"columns": cols, "rows": x.tolist(), "json": {"samples": x}}, True


COMMANDS = {
    "check": cmd_check,
    "envelope": cmd_envelope,
    "hazard": cmd_hazard,
    "moment-bound": cmd_moment_bound,
    "converge": cmd_converge,
    "confint": cmd_confint,
    "coverage": cmd_coverage,
    "sample": cmd_sample,
}
DEFAULT_FORMAT = {"confint": "json"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logconcave", description="Checks and estimates for log-concave densities.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        sp.add_argument("--out", help="artifact path; a manifest is written next to it")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        return sp

    density_help = "catalog:<name>[:dim], control:bimodal, a JSON object, or a JSON file"
    sp = common(sub.add_parser("check", help="run the simplex and ball inequality suite"))
    sp.add_argument("--density", required=True, help=density_help)
    sp.add_argument("--suite", default="all", help=f"'all' or a comma list of {','.join(SUITE_CHECKS)}")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--points", type=int, default=1000, help="random points for the envelope check")

    sp = common(sub.add_parser("envelope", help="envelope domination and exponential tail constants"))
    sp.add_argument("--density", required=True, help=density_help)
    sp.add_argument("--simplex", help='JSON {"vertices": [[...], ...]}; random when omitted')
    sp.add_argument("--points", type=int, default=1000)

    sp = common(sub.add_parser("hazard", help="monotonicity of both hazard functions on a quantile grid"))
    sp.add_argument("--density", required=True, help=density_help)
    sp.add_argument("--grid", type=int, default=1000)

    sp = common(sub.add_parser("moment-bound", help="pointwise bound on f(x_o)^2 by the variance"))
    sp.add_argument("--density", required=True, help=density_help)
    sp.add_argument("--x0", required=True, help="comma-separated evaluation points")

    sp = common(sub.add_parser("converge", help="distances, moments and Laplace transforms along a sequence"))
    sp.add_argument("--sequence", choices=SEQUENCES, default="gaussian")
    sp.add_argument("--n", default="1,2,5,10,20,50,100,200")
    sp.add_argument("--poly", action="append", help="moment polynomial; repeatable")
    sp.add_argument("--theta", help="comma-separated tilts for the Laplace transform")
    sp.add_argument("--weight-theta", type=float, default=0.0)
    sp.add_argument("--weight-eps", type=float, help="enables the weighted L1 column")
    sp.add_argument("--sup-interval", help="lo,hi for the sup-distance column")

    for name, text in (("confint", "KS-ball confidence interval for a moment"), ("coverage", "coverage simulation")):
        sp = common(sub.add_parser(name, help=text))
        if name == "confint":
            sp.add_argument("--data", required=True, help="CSV file, first column used")
        else:
            sp.add_argument("--truth", required=True, help=density_help)
            sp.add_argument("--n", type=int, default=200)
            sp.add_argument("--reps", type=int, default=200)
            sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--poly", default="x")
        sp.add_argument("--alpha", type=float, default=0.05)
        sp.add_argument("--max-knots", type=int, default=SearchConfig.max_knots)

    sp = common(sub.add_parser("sample", help="draw samples from a density"))
    sp.add_argument("--density", required=True, help=density_help)
    sp.add_argument("--n", type=int, default=1000)
    return p


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    fmt = args.format or DEFAULT_FORMAT.get(args.command, "csv")
    try:
        tol = Tolerances.from_env()
    except (ValueError, TypeError) as exc:
        print(f"error: {ENV_VAR}: {exc}", file=stderr)
        return EXIT_INPUT
    try:
        with np.errstate(over="ignore", under="ignore"):
            artifact, ok = COMMANDS[args.command](args, tol)
    except (InputError, *_INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except _NUMERIC_ERRORS as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERIC

    if fmt == "csv":
        text = _csv_text(artifact["columns"], artifact["rows"])
    else:
        text = _json_text({"command": args.command, "seed": args.seed, "result": artifact["json"]})
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        config = _config(args)
        digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
        manifest = {
            "tool": "logconcave",
            "version": __version__,
            "command": args.command,
            "seed": args.seed,
            "tolerances": tol.as_dict(),
            "config": config,
            "config_digest": digest,
            "format": fmt,
            "columns": artifact["columns"],
            "columns_version": COLUMNS_VERSION,
            "artifact": out.name,
            "artifact_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "passed": ok,
        }
        Path(str(out) + ".manifest.json").write_text(_json_text(manifest))
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
