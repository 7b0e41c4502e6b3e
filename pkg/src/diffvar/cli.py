"""Command line front end.

Subcommands: ``estimate`` (variance curve from a CSV), ``simulate``
(risk report for one scenario), ``rates`` (convergence-slope
experiment), ``normality`` (shape diagnostics), ``diffseq`` (sequence
construction and validation).

Exit codes: 0 success, 1 bad flags or scenario setup, 2 malformed
input, 3 computation failure.  Simulation subcommands require an
explicit --seed; nothing is ever wall-clock seeded.  Outputs are
written atomically (temp file + rename), so error paths leave no
partial files.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import bandwidth as bw
from . import diffseq, simlab
from .errors import DiffvarError
from .estimator import Sample, estimate_variance
from .kernels import KERNEL_KINDS, kernel
from .serialize import dump_json
from .smoother import SmootherConfig

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        _write_atomic(path, text + "\n")


def _read_sample_csv(path: str) -> Sample:
    """Parse a two-column x,y CSV into a Sample; all failures are input errors."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise _InputError(f"{path}: expected header 'x,y'")
    xs, ys = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise _InputError(f"{path}:{lineno}: expected two columns")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError as exc:
            raise _InputError(f"{path}:{lineno}: {exc}") from exc
    try:
        return Sample(np.array(xs), np.array(ys))
    except (DiffvarError, ValueError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _sidecar_path(output: str) -> str:
    p = Path(output)
    sidecar = p.with_suffix(".json")
    if str(sidecar) == str(p):
        sidecar = Path(str(p) + ".json")
    return str(sidecar)


def _parse_function(spec: str) -> simlab.FunctionSpec:
    """Parse 'name' or 'name:key=val,key=val' into a FunctionSpec."""
    name, _, rest = spec.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                raise _UsageError(f"bad function parameter {item!r} in {spec!r}")
            try:
                params[key.strip()] = float(val)
            except ValueError as exc:
                raise _UsageError(f"bad value in {item!r}: {exc}") from exc
    return simlab.function_spec(name.strip(), **params)


def _resolve_sequence(args) -> diffseq.DifferenceSequence:
    if getattr(args, "sequence_file", None):
        try:
            import json
            coeffs = json.loads(Path(args.sequence_file).read_text())
        except (OSError, ValueError) as exc:
            raise _InputError(f"cannot read sequence file: {exc}") from exc
        try:
            return diffseq.validate(coeffs)
        except DiffvarError as exc:
            raise _InputError(f"{args.sequence_file}: {exc}") from exc
    if args.sequence == "optimal":
        return diffseq.optimal_sequence(args.order)
    if args.sequence in ("first_difference", "gsjs"):
        return diffseq.standard_sequence(args.sequence)
    raise _UsageError(f"unknown sequence {args.sequence!r}")


def _add_estimator_flags(parser, bandwidth_modes: str) -> None:
    parser.add_argument(
        "--sequence", default="first_difference",
        choices=["first_difference", "gsjs", "optimal"],
        help="difference sequence (optimal uses --order)")
    parser.add_argument("--order", type=int, default=2,
                        help="order r for --sequence optimal")
    parser.add_argument("--sequence-file", default=None,
                        help="JSON array of explicit coefficients")
    parser.add_argument("--kernel", default="epanechnikov", choices=KERNEL_KINDS)
    parser.add_argument("--degree", type=int, default=1)
    parser.add_argument("--bandwidth", default=None, required=True,
                        help=f"bandwidth: a number or one of {{{bandwidth_modes}}}")
    parser.add_argument("--gamma", type=float, default=None,
                        help="smoothness exponent for --bandwidth rate")
    parser.add_argument("--scale", type=float, default=1.0,
                        help="scale constant for --bandwidth rate")


def _fixed_bandwidth(args, n: int) -> float:
    if args.bandwidth == "rate":
        if args.gamma is None:
            raise _UsageError("--bandwidth rate requires --gamma")
        return bw.rate_optimal_bandwidth(n, args.gamma, args.scale)
    try:
        h = float(args.bandwidth)
    except ValueError:
        raise _UsageError(f"bad --bandwidth {args.bandwidth!r}") from None
    if not 0.0 < h <= 1.0:
        raise _UsageError("fixed bandwidth must be in (0, 1]")
    return h


# --- subcommands -----------------------------------------------------------

def _cmd_estimate(args) -> int:
    sample = _read_sample_csv(args.input)
    seq = _resolve_sequence(args)
    if not 0.0 <= args.grid_min < args.grid_max <= 1.0:
        raise _UsageError("need 0 <= grid-min < grid-max <= 1")
    grid = np.linspace(args.grid_min, args.grid_max, args.grid_size)

    cv_report = None
    if args.bandwidth == "cv":
        if args.seed is None:
            raise _UsageError("--bandwidth cv requires --seed")
        base = SmootherConfig(0.25, args.degree, kernel(args.kernel))
        cv_report = bw.cv_select(
            sample, seq, base, bw.default_grid(sample),
            folds=args.folds, seed=args.seed,
        )
        h = cv_report.selected
    else:
        h = _fixed_bandwidth(args, sample.n)

    config = SmootherConfig(h, args.degree, kernel(args.kernel))
    estimate = estimate_variance(
        sample, seq, config, grid, expand_to_minimum=args.expand
    )

    lines = ["x,vhat"]
    lines += [f"{float(x)!r},{float(v)!r}"
              for x, v in zip(estimate.grid, estimate.values)]
    provenance = {
        "input": args.input,
        "sequence": {"order": seq.order, "coefficients": seq.to_list()},
        "kernel": args.kernel,
        "degree": args.degree,
        "bandwidth_mode": args.bandwidth,
        "bandwidth": h,
        "cv": None if cv_report is None else cv_report.to_dict(),
        "grid": {"min": args.grid_min, "max": args.grid_max,
                 "size": args.grid_size},
        "expanded_points": list(estimate.provenance.expanded_points),
        "has_negative_values": estimate.provenance.has_negative_values,
    }
    _write_atomic(args.output, "\n".join(lines) + "\n")
    _write_atomic(_sidecar_path(args.output), dump_json(provenance) + "\n")
    return 0


def _build_scenario(args) -> simlab.Scenario:
    try:
        law = simlab.ErrorLaw(args.error_law, df=args.df)
        mean_fn = _parse_function(args.mean)
        var_fn = _parse_function(args.variance)
        xs = np.arange(1, args.n + 1) / (args.n + 1.0)
        v = np.asarray(var_fn(xs), dtype=float)
        if np.any(v <= 0.0):
            raise _UsageError("variance function must be positive on the design")
        delta = float(v.min()) / 2.0
        return simlab.Scenario(
            label=f"cli-{mean_fn.name}-{var_fn.name}-n{args.n}",
            mean_fn=mean_fn,
            var_fn=var_fn,
            n=args.n,
            error_law=law,
            var_class=simlab.HoelderClassSpec(2.0, 10.0, float(v.max()), delta=delta),
        )
    except DiffvarError as exc:
        # scenario configuration comes entirely from flags
        raise _UsageError(str(exc)) from exc


def _cmd_simulate(args) -> int:
    scenario = _build_scenario(args)
    seq = _resolve_sequence(args)
    h = _fixed_bandwidth(args, args.n)
    est = simlab.EstimatorConfig(
        sequence=seq,
        smoother=SmootherConfig(h, args.degree, kernel(args.kernel)),
    )
    points = args.x0 or []
    if not points and args.no_global:
        raise _UsageError("nothing to simulate: no --x0 and --no-global")
    report = simlab.risk_report(
        scenario, est, args.replications, args.seed,
        points=points, include_global=not args.no_global,
        margin=args.margin, grid_size=args.grid_size, threads=args.threads,
    )
    _emit(dump_json(report), args.output)
    return 0


def _cmd_rates(args) -> int:
    ns = sorted(set(args.n))
    if len(ns) < 4:
        raise _UsageError("need at least 4 distinct --n values")
    seq = _resolve_sequence(args)
    degree = args.degree if args.degree is not None else int(np.floor(args.gamma)) + 1
    schedule = simlab.rate_schedule(
        seq, args.gamma, args.scale, degree=degree, kernel_spec=kernel(args.kernel)
    )
    scenarios = [simlab.smooth_scenario(n) for n in ns]
    report = simlab.rate_experiment(
        scenarios, schedule, args.replications, args.seed,
        gamma=args.gamma, x0=args.pointwise,
        margin=args.margin, grid_size=args.grid_size, threads=args.threads,
    )
    _emit(dump_json(report), args.output)
    return 0


def _cmd_normality(args) -> int:
    try:
        law = simlab.ErrorLaw(args.error_law, df=args.df)
        scenario = simlab.smooth_scenario(args.n, error_law=law)
    except DiffvarError as exc:
        raise _UsageError(str(exc)) from exc
    seq = _resolve_sequence(args)
    h = min(args.undersmooth_scale * args.n ** (-0.3), 0.5)
    est = simlab.EstimatorConfig(
        sequence=seq,
        smoother=SmootherConfig(h, args.degree, kernel(args.kernel)),
    )
    report = simlab.normality_experiment(
        scenario, est, args.x0, args.replications, args.seed,
        threads=args.threads,
    )
    _emit(dump_json(report), args.output)
    if args.draws_out:
        lines = ["vhat"] + [repr(float(v)) for v in report.draws]
        _write_atomic(args.draws_out, "\n".join(lines) + "\n")
    return 0


def _cmd_diffseq(args) -> int:
    chosen = [args.optimal is not None, args.standard is not None,
              args.validate is not None]
    if sum(chosen) != 1:
        raise _UsageError("choose exactly one of --optimal, --standard, --validate")
    if args.optimal is not None:
        seq = diffseq.optimal_sequence(args.optimal, tolerance=args.tolerance)
    elif args.standard is not None:
        seq = diffseq.standard_sequence(args.standard)
    else:
        try:
            coeffs = [float(c) for c in args.validate.split(",")]
        except ValueError as exc:
            raise _InputError(f"bad coefficient list: {exc}") from exc
        try:
            seq = diffseq.validate(coeffs)
        except DiffvarError as exc:
            raise _InputError(f"{type(exc).__name__}: {exc}") from exc
    payload = {
        "order": seq.order,
        "coefficients": seq.to_list(),
        "variance_factor": diffseq.variance_factor(seq),
        "min_constant": diffseq.min_constant(seq.order),
    }
    _emit(dump_json(payload), args.output)
    return 0


# --- wiring ------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="diffvar",
                     description="Difference-based variance function estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[], help="fit a variance curve to a CSV")
    p.add_argument("--input", required=True, help="CSV with header x,y")
    p.add_argument("--output", required=True, help="CSV x,vhat (JSON sidecar added)")
    _add_estimator_flags(p, "cv,rate")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid-size", type=int, default=101)
    p.add_argument("--grid-min", type=float, default=0.05)
    p.add_argument("--grid-max", type=float, default=0.95)
    p.add_argument("--expand", action="store_true",
                   help="grow starved windows to the minimum viable bandwidth")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="risk report for one scenario")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replications", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mean", default="sine:offset=2,amplitude=1")
    p.add_argument("--variance", default="sine:offset=0.5,amplitude=0.25")
    p.add_argument("--error-law", default="gaussian",
                   choices=["gaussian", "scaled_uniform", "student_t"])
    p.add_argument("--df", type=float, default=None)
    p.add_argument("--x0", type=float, action="append",
                   help="pointwise risk location (repeatable)")
    p.add_argument("--no-global", action="store_true")
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--grid-size", type=int, default=101)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default=None)
    _add_estimator_flags(p, "rate")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("rates", help="convergence-slope experiment")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int, action="append", required=True,
                   help="sample size (repeat >= 4 times)")
    p.add_argument("--replications", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--sequence", default="first_difference",
                   choices=["first_difference", "gsjs", "optimal"])
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--sequence-file", default=None)
    p.add_argument("--kernel", default="epanechnikov", choices=KERNEL_KINDS)
    p.add_argument("--degree", type=int, default=None,
                   help="default: floor(gamma) + 1")
    p.add_argument("--pointwise", type=float, default=None,
                   help="measure pointwise risk at this x0 instead of global")
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--grid-size", type=int, default=101)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("normality", help="replication-shape diagnostics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replications", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--x0", type=float, default=0.5)
    p.add_argument("--undersmooth-scale", type=float, default=4.4,
                   help="bandwidth = scale * n^(-0.3), capped at 0.5")
    p.add_argument("--error-law", default="gaussian",
                   choices=["gaussian", "scaled_uniform", "student_t"])
    p.add_argument("--df", type=float, default=None)
    p.add_argument("--sequence", default="first_difference",
                   choices=["first_difference", "gsjs", "optimal"])
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--sequence-file", default=None)
    p.add_argument("--kernel", default="epanechnikov", choices=KERNEL_KINDS)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default=None)
    p.add_argument("--draws-out", default=None,
                   help="also write raw replication draws as CSV")
    p.set_defaults(func=_cmd_normality)

    p = sub.add_parser("diffseq", help="construct or validate difference sequences")
    p.add_argument("--optimal", type=int, default=None, metavar="R",
                   help="compute the variance-minimizing order-R sequence")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--standard", default=None,
                   choices=["first_difference", "gsjs"])
    p.add_argument("--validate", default=None, metavar="C0,C1,...",
                   help="check a comma-separated coefficient list")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_diffseq)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    try:
        # setup errors (bad flag combinations, bad scenario parameters)
        # are usage errors; anything raised after inputs are resolved is
        # an input or computation failure
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except DiffvarError as exc:
        point = getattr(exc, "grid_point", None)
        where = f" at grid point {point}" if point is not None else ""
        print(f"computation failed{where}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
