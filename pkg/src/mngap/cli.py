"""Command-line front end: solve, verify, scan, and eval subcommands.

Data goes to files or stdout, messages to stderr.  Exit codes are a
stable contract: 0 success, 1 usage or domain error, 2 non-convergence,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .errors import MnGapError
from .model import GridFn, ModelParams, cutoff_max_ratio, eval_w, make_grid, upper_bound_V
from .operators import apply_A, grid_for_B
from .scan import sweep
from .solver import SolveConfig, solve_A, solve_B_to_zero, solve_C_to_zero
from .verify import run_suite
from ._plot import svg_line_chart

__all__ = ["main"]

SCHEMA = "mn-gap/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2
EXIT_VERIFY_FAILED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse failures through our exit-code contract (1, not 2)
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    p = _Parser(prog="mngap", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_params(sp, required=True):
        sp.add_argument("--config", help="flat key=value file; flags override it")
        sp.add_argument("--lambda", dest="lam", type=float, default=None,
                        required=False, help="coupling (> 0)")
        sp.add_argument("--eps", type=float, default=None, help="infrared cutoff")
        sp.add_argument("--big-lambda", default=None,
                        help='ultraviolet cutoff; accepts "inf"')
        sp.add_argument("--gauge-coupling", type=float, default=None)

    sp = sub.add_parser("solve", help="run one fixed-point solve")
    add_params(sp)
    sp.add_argument("--n", type=int, default=None, help="grid nodes (default 2048)")
    sp.add_argument("--tol", type=float, default=None, help="sup-norm tolerance")
    sp.add_argument("--max-iter", type=int, default=None)
    sp.add_argument("--damping", type=float, default=None)
    sp.add_argument("--operator", choices=("auto", "A", "B", "C"), default="auto")
    sp.add_argument("--start", type=float, default=None,
                    help="constant starting value for the B/C iteration (default 1)")
    sp.add_argument("--x-max", type=float, default=None,
                    help="largest certified evaluation point for operator B")
    sp.add_argument("--out", default="solve", help="output prefix")
    sp.add_argument("--plot", choices=("svg",), default=None)

    sp = sub.add_parser("verify", help="run the verification suite")
    add_params(sp, required=False)
    sp.add_argument("--in", dest="in_prefix", default=None,
                    help="prefix of a prior solve output")
    sp.add_argument("--only", default=None, help="run a single named check")
    sp.add_argument("--out", default=None, help="report file (default stdout)")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)

    sp = sub.add_parser("scan", help="sweep the coupling and tabulate phases")
    sp.add_argument("--config", help="flat key=value file; flags override it")
    sp.add_argument("--lambda-range", default=None,
                    help="inclusive range start:stop:step")
    sp.add_argument("--ratio", type=float, default=None, help="eps/Lambda")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", default="scan", help="output prefix")
    sp.add_argument("--plot", choices=("svg",), default=None)

    sp = sub.add_parser("eval", help="print individual quantities")
    ev = sp.add_subparsers(dest="what", required=True)
    e = ev.add_parser("w", help="the lower envelope w(x)")
    add_params(e)
    e.add_argument("--x", type=float, nargs="+", required=True)
    e = ev.add_parser("cutoff", help="largest admissible eps/Lambda")
    e.add_argument("--config")
    e.add_argument("--lambda", dest="lam", type=float, default=None)
    e = ev.add_parser("apply-a", help="apply the operator to a CSV-sampled function")
    add_params(e)
    e.add_argument("--csv", required=True, help="file with x,u columns")
    e.add_argument("--x", type=float, nargs="*", default=None,
                   help="evaluation points (default: every node)")
    return p


def _read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"bad config line (need key = value): {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    for key, value in _read_config(args.config).items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)


def _params_from_args(args) -> ModelParams:
    if args.lam is None:
        raise _UsageError("--lambda is required (flag or config)")
    if args.eps is None:
        raise _UsageError("--eps is required (flag or config)")
    if args.big_lambda is None:
        raise _UsageError("--big-lambda is required (flag or config)")
    mapping = {"lambda": args.lam, "eps": args.eps, "big_lambda": args.big_lambda}
    if getattr(args, "gauge_coupling", None) is not None:
        mapping["gauge_coupling"] = args.gauge_coupling
    return ModelParams.from_mapping(mapping)


def _config_from_args(args) -> SolveConfig:
    kw = {}
    if getattr(args, "tol", None) is not None:
        kw["tol"] = float(args.tol)
    if getattr(args, "n", None) is not None:
        kw["grid_n"] = int(args.n)
    if getattr(args, "max_iter", None) is not None:
        kw["max_iter"] = int(args.max_iter)
    if getattr(args, "damping", None) is not None:
        kw["damping"] = float(args.damping)
    return SolveConfig(**kw)


def _write_solution_csv(path: str, fn: GridFn, params: ModelParams) -> None:
    x = fn.grid.nodes
    if params.uv_finite:
        w = eval_w(x, params)
        upper = np.full_like(x, upper_bound_V(params))
    else:
        w = np.full_like(x, math.nan)
        upper = np.full_like(x, math.nan)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "u", "w", "upper_bound"])
        for i in range(x.size):
            writer.writerow([repr(float(x[i])), repr(float(fn.values[i])),
                             repr(float(w[i])), repr(float(upper[i]))])


def _read_solution_csv(path: str):
    xs, us = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "x" not in reader.fieldnames or "u" not in reader.fieldnames:
            raise _UsageError(f"{path}: expected a header with x,u columns")
        for row in reader:
            xs.append(float(row["x"]))
            us.append(float(row["u"]))
    return np.asarray(xs), np.asarray(us)


def _json_params(params: ModelParams) -> dict:
    out = params.to_mapping()
    if not params.uv_finite:
        out["big_lambda"] = "inf"
    return out


def _cmd_solve(args) -> int:
    params = _params_from_args(args)
    cfg = _config_from_args(args)
    operator = args.operator
    if operator == "auto":
        if params.lam < 1:
            operator = "C" if params.uv_finite else "B"
        else:
            operator = "A"
    start = 1.0 if args.start is None else float(args.start)
    if operator == "A":
        if not params.uv_finite:
            raise _UsageError("operator A needs a finite --big-lambda")
        report = solve_A(params, cfg)
    elif operator == "C":
        if not params.uv_finite:
            raise _UsageError("operator C needs a finite --big-lambda")
        grid = make_grid(params.eps, params.big_lambda, cfg.grid_n, "log")
        report = solve_C_to_zero(params, GridFn.constant(grid, start), cfg)
    else:
        x_max = 100.0 * params.eps if args.x_max is None else float(args.x_max)
        grid = grid_for_B(params, start, x_max, cfg.tol, cfg.grid_n)
        report = solve_B_to_zero(params, GridFn.constant(grid, start), cfg)

    prefix = args.out
    payload = {
        "schema": SCHEMA,
        "kind": "solve-report",
        "operator": operator,
        "params": _json_params(params),
        "config": {"tol": cfg.tol, "max_iter": cfg.max_iter, "damping": cfg.damping,
                   "grid_n": cfg.grid_n, "seed": cfg.seed},
        "grid": {"kind": report.final.grid.kind, "lo": report.final.grid.lo,
                 "hi": report.final.grid.hi, "n": report.final.grid.n},
        "report": report.summary_dict(),
    }
    with open(prefix + ".json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    _write_solution_csv(prefix + ".csv", report.final, params)
    if args.plot == "svg":
        svg_line_chart(prefix + ".svg", report.final.grid.nodes, report.final.values,
                       log_x=True, title=f"fixed point, lambda={params.lam}",
                       x_label="x", y_label="u(x)")
    print(f"{prefix}.json {prefix}.csv written; converged={report.converged} "
          f"iterations={report.iterations}", file=sys.stderr)
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _cmd_verify(args) -> int:
    if args.in_prefix is not None:
        try:
            with open(args.in_prefix + ".json", encoding="utf-8") as fh:
                payload = json.load(fh)
            xs, us = _read_solution_csv(args.in_prefix + ".csv")
        except (OSError, json.JSONDecodeError) as exc:
            print(f"mngap verify: cannot read input: {exc}", file=sys.stderr)
            return EXIT_USAGE
        params = ModelParams.from_mapping(payload["params"])
        grid_kind = payload.get("grid", {}).get("kind", "log")
        final = GridFn(_grid_from_nodes(xs, grid_kind), us)
        solve_tol = float(payload.get("config", {}).get("tol", 1e-10))
        regime = payload.get("report", {}).get("regime", "proven-broken")
    else:
        params = _params_from_args(args)
        cfg = _config_from_args(args)
        report = solve_A(params, cfg)
        final = report.final
        solve_tol = cfg.tol
        regime = report.regime

    checks = run_suite(final, params, solve_tol, regime=regime, only=args.only)
    if args.only is not None and not checks:
        raise _UsageError(f"no check named {args.only!r}")
    payload = {
        "schema": SCHEMA,
        "kind": "verify-report",
        "params": _json_params(params),
        "regime": regime,
        "checks": [c.to_dict() for c in checks],
        "all_passed": all(c.passed for c in checks if c.gating),
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in checks:
        flag = "PASS" if c.passed else ("FAIL" if c.gating else "noted")
        print(f"  {c.name:<22} {flag}  margin={c.margin:.3g}", file=sys.stderr)
    return EXIT_OK if payload["all_passed"] else EXIT_VERIFY_FAILED


def _grid_from_nodes(nodes: np.ndarray, kind: str):
    from .model import Grid

    return Grid(nodes, kind)


def _parse_range(text: str):
    try:
        start, stop, step = (float(tok) for tok in text.split(":"))
    except ValueError:
        raise _UsageError(f"bad --lambda-range {text!r}; expected start:stop:step")
    if step <= 0 or stop < start:
        raise _UsageError(f"empty --lambda-range {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _cmd_scan(args) -> int:
    if args.lambda_range is None:
        raise _UsageError("--lambda-range is required")
    if args.ratio is None:
        raise _UsageError("--ratio is required")
    lambdas = _parse_range(args.lambda_range)
    if not lambdas:
        raise _UsageError("empty coupling range")
    cfg_kw = {}
    if args.tol is not None:
        cfg_kw["tol"] = float(args.tol)
    if args.n is not None:
        cfg_kw["grid_n"] = int(args.n)
    records = sweep(lambdas, float(args.ratio), SolveConfig(**cfg_kw))
    fields = ["lambda", "ratio", "regime", "fixed_norm", "broken", "iterations",
              "converged", "a_half_start_norm", "a_half_start_converged",
              "c_final_norm", "c_converged"]
    path = args.out + ".csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, restval="")
        writer.writeheader()
        for rec in records:
            row = rec.to_row()
            row["fixed_norm"] = repr(float(row["fixed_norm"]))
            writer.writerow(row)
    if args.plot == "svg":
        svg_line_chart(args.out + ".svg", [r.lam for r in records],
                       [r.fixed_norm for r in records], log_x=True, log_y=True,
                       title=f"fixed-point norm vs coupling (ratio={args.ratio})",
                       x_label="lambda", y_label="sup |fixed point|")
    print(f"{path} written ({len(records)} rows)", file=sys.stderr)
    return EXIT_OK


def _cmd_eval(args) -> int:
    if args.what == "w":
        params = _params_from_args(args)
        for xv in args.x:
            print(f"{eval_w(xv, params):.15g}")
    elif args.what == "cutoff":
        if args.lam is None:
            raise _UsageError("--lambda is required")
        print(f"{cutoff_max_ratio(args.lam):.15g}")
    elif args.what == "apply-a":
        params = _params_from_args(args)
        xs, us = _read_solution_csv(args.csv)
        fn = GridFn(_grid_from_nodes(xs, "log"), us)
        au = apply_A(fn, params)
        if args.x:
            for xv in args.x:
                print(f"{float(np.interp(xv, xs, au.values)):.15g}")
        else:
            for v in au.values:
                print(f"{float(v):.15g}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args) if hasattr(args, "config") else None
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "scan":
            return _cmd_scan(args)
        return _cmd_eval(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        print("run 'mngap --help' for usage", file=sys.stderr)
        return EXIT_USAGE
    except MnGapError as exc:
        print(f"mngap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mngap: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
