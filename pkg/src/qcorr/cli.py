"""Command-line interface: ``qcorr {measure,sweep,verify,oracle,symmetry}``.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 domain
error, 4 unwritable output.  Every error path prints one line starting with
``error:`` to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import replace

import numpy as np

from .errors import QCorrError
from .measures import MeasureKind, compute, objective_for, pair_symmetry_check
from .optimizer import OptimizerConfig, config_from_env, oracle_minimize
from .states import StateSpec, load_state_spec, pair_state
from .verify import report_json, run_verify

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_OUTPUT = 4

_FAMILIES = {"ghz": "ghz_like", "ghz_like": "ghz_like", "w": "w"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_state_args(p, pair=True, reduction=True):
    g = p.add_argument_group("state")
    g.add_argument("--family", choices=sorted(_FAMILIES), help="built-in state family")
    g.add_argument("--n", type=int, help="number of qubits N")
    g.add_argument("--alpha", type=float, help="GHZ-like angle, radians unless --degrees (default pi/4)")
    g.add_argument("--degrees", action="store_true", help="read angles in degrees")
    g.add_argument("--state-file", help="JSON state spec, overrides --family/--n/--alpha")
    if pair:
        g.add_argument("--pair", type=int, nargs=2, default=[1, 2], metavar=("I1", "I2"))
    if reduction:
        g.add_argument("--reduction-n", type=int, help="size n of the intermediate reduced state (default N)")


def _add_opt_args(p):
    g = p.add_argument_group("optimizer (defaults from $QCORR_OPT_CONFIG if set)")
    g.add_argument("--grid-theta", type=int, dest="grid_points_theta")
    g.add_argument("--grid-phi", type=int, dest="grid_points_phi")
    g.add_argument("--pair-grid-theta", type=int, dest="pair_grid_points_theta")
    g.add_argument("--pair-grid-phi", type=int, dest="pair_grid_points_phi")
    g.add_argument("--refine-max-iter", type=int, dest="refine_max_iter")
    g.add_argument("--refine-tol", type=float, dest="refine_tol")
    g.add_argument("--simplex-scale", type=float, dest="simplex_scale")
    g.add_argument("--multistart", type=int)
    g.add_argument("--seed", type=int)


def _kind(s):
    try:
        return MeasureKind.parse(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("measure", help="compute measures on a pair state")
    _add_state_args(p)
    _add_opt_args(p)
    p.add_argument("--kind", type=_kind, nargs="+", default=list(MeasureKind))
    p.add_argument("--measured-side", choices=["first", "second"], default="first")
    p.add_argument("--format", choices=["json", "table"], default="table")

    p = sub.add_parser("sweep", help="measures along an alpha sweep, written as CSV")
    _add_state_args(p)
    _add_opt_args(p)
    p.add_argument("--alpha-start", type=float, help="default 0")
    p.add_argument("--alpha-end", type=float, help="default pi")
    p.add_argument("--samples", type=int, default=181)
    p.add_argument("--measures", default="qd,hsd,lmimd,lemid", help="comma-separated subset of qd,hsd,lmimd,lemid")
    p.add_argument("--output", "-o", default="-", help="CSV path, '-' for stdout")

    p = sub.add_parser("verify", help="check every reference value")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--all", action="store_true", help="run every target (default)")
    sel.add_argument("--target", nargs="+", help="target ids or id prefixes")
    _add_opt_args(p)
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--report", help="also write the JSON report to this path")

    p = sub.add_parser("oracle", help="brute-force grid minimum of a measure objective")
    _add_state_args(p)
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--measured-side", choices=["first", "second"], default="first")
    p.add_argument("--resolution", type=int, default=181)
    p.add_argument("--format", choices=["json", "table"], default="table")

    p = sub.add_parser("symmetry", help="compare a measure across all ordered pairs")
    _add_state_args(p, pair=False)
    _add_opt_args(p)
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--format", choices=["json", "table"], default="table")
    return parser


def _config(args) -> OptimizerConfig:
    cfg = config_from_env()
    overrides = {k: getattr(args, k) for k in OptimizerConfig().to_dict() if getattr(args, k, None) is not None}
    return replace(cfg, **overrides) if overrides else cfg


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _state(args, alpha=None) -> StateSpec:
    if args.state_file:
        return load_state_spec(args.state_file)
    if args.family is None or args.n is None:
        raise _UsageError("either --state-file or both --family and --n are required")
    kind = _FAMILIES[args.family]
    if kind == "ghz_like":
        if alpha is None:
            alpha = math.pi / 4 if args.alpha is None else _angle(args, args.alpha)
        return StateSpec(kind, args.n, alpha=alpha)
    return StateSpec(kind, args.n)


def _reduction(args, spec) -> int:
    return spec.n_parties if args.reduction_n is None else args.reduction_n


def _emit_table(rows, out):
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k:<{width}}  {v}\n")


def cmd_measure(args, out) -> int:
    spec = _state(args)
    cfg = _config(args)
    rho = pair_state(spec, _reduction(args, spec), *args.pair)
    results = [compute(k, rho, cfg, args.measured_side) for k in args.kind]
    if args.format == "json":
        out.write(json.dumps([r.as_dict() for r in results], indent=1) + "\n")
        return 0
    for r in results:
        rows = [("kind", r.kind.value), ("value", f"{r.value:.10g}"), ("parties", r.parties),
                ("argmin", json.dumps(r.argmin.as_dict()))]
        if r.report is not None:
            rows.append(("optimizer", json.dumps(r.report.as_dict())))
        if r.warnings:
            rows.append(("warnings", ", ".join(r.warnings)))
        _emit_table(rows, out)
        out.write("\n")
    return 0


def _sweep_csv(args) -> str:
    try:
        measures = [MeasureKind.parse(m.strip()) for m in args.measures.split(",") if m.strip()]
    except ValueError as exc:
        raise _UsageError(str(exc))
    if not measures:
        raise _UsageError("--measures is empty")
    if args.samples < 2:
        raise _UsageError("--samples must be >= 2")
    start = 0.0 if args.alpha_start is None else _angle(args, args.alpha_start)
    end = math.pi if args.alpha_end is None else _angle(args, args.alpha_end)
    if not start < end:
        raise _UsageError("--alpha-start must be smaller than --alpha-end")
    cfg = _config(args)
    buf = io.StringIO()
    buf.write(",".join(["alpha"] + [m.value for m in measures]) + "\n")
    for alpha in np.linspace(start, end, args.samples):
        spec = _state(args, alpha=float(alpha))
        rho = pair_state(spec, _reduction(args, spec), *args.pair)
        vals = [compute(m, rho, cfg).value for m in measures]
        buf.write(",".join(format(float(x), ".17g") for x in [alpha] + vals) + "\n")
    return buf.getvalue()


def cmd_sweep(args, out) -> int:
    text = _sweep_csv(args)
    if args.output == "-":
        out.write(text)
        return 0
    try:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        _error(f"cannot write {args.output}: {exc.strerror}")
        return EXIT_OUTPUT
    return 0


def cmd_verify(args, out) -> int:
    report = run_verify(args.target if args.target else "all", _config(args))
    text = report_json(report)
    if args.report:
        try:
            with open(args.report, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            _error(f"cannot write {args.report}: {exc.strerror}")
            return EXIT_OUTPUT
    if args.format == "json":
        out.write(text + "\n")
    else:
        for e in report:
            status = "PASS" if e["pass"] else "FAIL"
            flag = f"  [{e['flag']}]" if "flag" in e else ""
            out.write(f"{status}  {e['id']:<28} delta={e['delta']:.3e}  tol={e['tolerance']:.0e}{flag}\n")
        failed = sum(not e["pass"] for e in report)
        out.write(f"{len(report) - failed}/{len(report)} targets passed\n")
    return 0 if all(e["pass"] for e in report) else EXIT_VERIFY_FAILED


def cmd_oracle(args, out) -> int:
    if args.kind is MeasureKind.LEMID:
        raise _UsageError("lemid has no optimization; use 'measure'")
    spec = _state(args)
    rho = pair_state(spec, _reduction(args, spec), *args.pair)
    obj, k = objective_for(args.kind, rho, args.measured_side)
    try:
        value = oracle_minimize(obj, k, args.resolution)
    except ValueError as exc:
        if isinstance(exc, QCorrError):
            raise
        raise _UsageError(str(exc))
    if args.format == "json":
        out.write(json.dumps({"kind": args.kind.value, "resolution": args.resolution, "oracle": value}) + "\n")
    else:
        _emit_table([("kind", args.kind.value), ("resolution", args.resolution), ("oracle", f"{value:.10g}")], out)
    return 0


def cmd_symmetry(args, out) -> int:
    spec = _state(args)
    rep = pair_symmetry_check(spec, _reduction(args, spec), args.kind, _config(args))
    if args.format == "json":
        out.write(json.dumps(rep.as_dict(), indent=1) + "\n")
        return 0
    verdict = "symmetric" if rep.symmetric else "not symmetric"
    relation = "<=" if rep.symmetric else ">"
    out.write(f"{verdict}, spread {rep.spread:.3e} {relation} 1e-6\n")
    for (a, b), v in rep.values.items():
        out.write(f"  ({a},{b})  {v:.10g}\n")
    return 0


COMMANDS = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "symmetry": cmd_symmetry,
}


def _error(msg: str):
    sys.stderr.write("error: " + " ".join(str(msg).split()) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except _UsageError as exc:
        _error(exc)
        return EXIT_USAGE
    except (QCorrError, OSError) as exc:
        _error(f"{type(exc).__name__}: {exc}")
        return EXIT_DOMAIN
    except (ValueError, json.JSONDecodeError) as exc:
        _error(f"{type(exc).__name__}: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
