"""Command-line interface: detect on a CSV, simulate a protocol, benchmark.

Exit codes: 0 on success, 2 for unreadable or malformed input files, 3 for
an infeasible or inconsistent configuration.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .costs import (
    BETA,
    GAUSSIAN_FIXED_VARIANCE,
    GAUSSIAN_FULL,
    VAR_FLOOR,
    PenaltySpec,
    bic_penalties,
    build_timeseries,
    estimate_variance_localreg,
    estimate_variance_mad,
    make_cost_model,
)
from .metrics import (
    EvalReport,
    multiple_testing_rates,
    param_mse,
    postprocess_alternating,
    sensitivity_precision,
    tpr_fpr,
)
from .segmenters import (
    apelt_fixed,
    apelt_plugin,
    apelt_profile,
    optimal_partitioning,
    pelt,
)
from .simulation import (
    EPIDEMIC_MEAN,
    PVALUES,
    SHORT_SEGMENT,
    DgpSpec,
    format_labeled_csv,
    generate,
    replication_seed,
)

METHODS = ("op", "pelt", "apelt-fixed", "apelt-plugin", "apelt-profile", "apelt-h")
PROTOCOLS = (EPIDEMIC_MEAN, SHORT_SEGMENT, PVALUES)
_FAMILY_BY_FLAG = {
    "gaussian": GAUSSIAN_FULL,
    "gaussian-fixed": GAUSSIAN_FIXED_VARIANCE,
    "beta": BETA,
}


class _InputError(Exception):
    """Unreadable or malformed input file (exit code 2)."""


def _read_values(path: str, header: bool) -> np.ndarray:
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    start = 1 if header else 0
    values = []
    for lineno, line in enumerate(lines[start:], start=start + 1):
        try:
            values.append(float(line))
        except ValueError as exc:
            raise _InputError(
                f"{path}: line {lineno}: could not parse {line.strip()!r} as a number"
            ) from exc
    if not values:
        raise _InputError(f"{path}: no values")
    return np.asarray(values)


def _resolve_family_flag(args) -> str:
    cost_flag = args.cost
    if args.method == "apelt-h":
        if cost_flag not in (None, "gaussian-fixed"):
            raise ValueError("apelt-h uses the shared-variance Gaussian cost; "
                             f"--cost {cost_flag} conflicts")
        return "gaussian-fixed"
    if cost_flag is not None:
        return cost_flag
    if getattr(args, "protocol", None) == PVALUES:
        return "beta"
    return "gaussian"


def _build_cost(args, ts, family_flag: str):
    family = _FAMILY_BY_FLAG[family_flag]
    kwargs = {}
    if args.min_seg_len is not None:
        kwargs["min_seg_len"] = args.min_seg_len
    if family == GAUSSIAN_FIXED_VARIANCE:
        if args.sigma2 is not None:
            sigma2 = args.sigma2
        elif args.variance_estimator == "mad":
            sigma2 = estimate_variance_mad(ts)
        else:
            sigma2 = estimate_variance_localreg(ts)
        kwargs["sigma2"] = max(float(sigma2), VAR_FLOOR)
    return make_cost_model(family, **kwargs)


def _parse_theta0(args, cost):
    if args.theta0 is None:
        return (1.0, 1.0) if cost.family == BETA else 0.0
    raw = args.theta0
    try:
        parsed = tuple(float(x) for x in raw.split(",")) if "," in raw else float(raw)
    except ValueError as exc:
        raise ValueError(f"could not parse --theta0 {raw!r}") from exc
    return cost.validate_theta0(parsed)


def _build_penalties(args, cost, n) -> PenaltySpec:
    base = bic_penalties(cost.family, n)
    return PenaltySpec(
        base.p_normal if args.penalty_normal is None else args.penalty_normal,
        base.p_epidemic if args.penalty_epidemic is None else args.penalty_epidemic,
        base.p_uniform if args.penalty is None else args.penalty,
    )


def _run_method(args, ts, cost, penalty, theta0):
    method = args.method
    if method == "op":
        return optimal_partitioning(ts, cost, penalty), {}
    if method == "pelt":
        return pelt(ts, cost, penalty), {}
    if method in ("apelt-fixed", "apelt-h"):
        return apelt_fixed(ts, cost, penalty, theta0), {}
    if method == "apelt-plugin":
        return apelt_plugin(ts, cost, penalty, window=args.window), {}
    if method == "apelt-profile":
        result = apelt_profile(ts, cost, penalty, plugin_window=args.window)
        extra = {
            "theta_star": result.theta_star,
            "profile_evaluations": len(result.trace),
        }
        return result.segmentation, extra
    raise ValueError(f"unknown method: {method!r}")


def _format_theta0(theta0) -> str:
    if isinstance(theta0, tuple):
        return ",".join(repr(x) for x in theta0)
    return repr(theta0)


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_detect(args) -> int:
    values = _read_values(args.input, args.header)
    ts = build_timeseries(values)
    family_flag = _resolve_family_flag(args)
    cost = _build_cost(args, ts, family_flag)
    theta0 = _parse_theta0(args, cost)
    penalty = _build_penalties(args, cost, ts.n)
    seg, extra = _run_method(args, ts, cost, penalty, theta0)

    lines = [
        f"n: {ts.n}",
        f"method: {args.method}",
        f"cost: {cost.family}",
    ]
    if args.method not in ("op", "pelt"):
        lines.append(f"theta0: {_format_theta0(seg.normal_param)}")
    for key, value in extra.items():
        lines.append(f"{key}: {value!r}" if isinstance(value, float) else f"{key}: {value}")
    if args.method in ("op", "pelt"):
        lines.append(f"penalty: {penalty.p_uniform!r}")
    else:
        lines.append(f"penalty_normal: {penalty.p_normal!r}")
        lines.append(f"penalty_epidemic: {penalty.p_epidemic!r}")
    lines.append(f"num_changepoints: {seg.m}")
    lines.append("changepoints: " + ",".join(str(int(c)) for c in seg.changepoints))
    if seg.states:
        lines.append("states: " + ",".join(seg.states))
    lines.append(f"total_cost: {seg.total_cost!r}")
    for i, ((t, s), rec) in enumerate(zip(seg.segments(), seg.params), start=1):
        fields = [f"start={t + 1}", f"end={s}"]
        if seg.states:
            fields.append(f"state={seg.states[i - 1]}")
        fields += [f"{k}={v!r}" for k, v in rec.items()]
        lines.append(f"segment {i}: " + " ".join(fields))
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


def _build_dgp_spec(args, seed: int) -> DgpSpec:
    return DgpSpec(
        protocol=args.protocol,
        n=args.n,
        seed=seed,
        m=args.m,
        scenario=args.scenario,
        L=args.L,
        delta=args.delta,
        sigma=args.sigma,
    )


def cmd_simulate(args) -> int:
    seq = generate(_build_dgp_spec(args, args.seed))
    _write_out(format_labeled_csv(seq), args.out)
    return 0


def _evaluate_rep(args, seq, seg) -> EvalReport:
    report = EvalReport(m_est=seg.m)
    if args.protocol == EPIDEMIC_MEAN:
        report.tpr, report.fpr = tpr_fpr(seg, seq, tol=args.tol)
        report.mse = param_mse(seg, seq)
    elif args.protocol == SHORT_SEGMENT:
        report.sensitivity, report.precision = sensitivity_precision(seg, seq, args.L)
    else:
        labelled = seg if seg.states else postprocess_alternating(seg)
        report.fdr, report.fnr, report.mdr = multiple_testing_rates(labelled, seq)
    return report


_BENCH_COLUMNS = {
    EPIDEMIC_MEAN: ("tpr", "fpr", "mse"),
    SHORT_SEGMENT: ("sensitivity", "precision"),
    PVALUES: ("fdr", "fnr", "mdr"),
}


def cmd_benchmark(args) -> int:
    if args.reps < 1:
        raise ValueError(f"need at least one replication, got --reps {args.reps}")
    columns = ("rep", "seed", "m_est") + _BENCH_COLUMNS[args.protocol]
    rows = []
    timings = []
    for rep in range(args.reps):
        seed = replication_seed(args.seed, rep)
        seq = generate(_build_dgp_spec(args, seed))
        ts = build_timeseries(seq.values)
        family_flag = _resolve_family_flag(args)
        cost = _build_cost(args, ts, family_flag)
        theta0 = _parse_theta0(args, cost)
        penalty = _build_penalties(args, cost, ts.n)
        t0 = time.perf_counter()
        seg, _ = _run_method(args, ts, cost, penalty, theta0)
        timings.append(time.perf_counter() - t0)
        report = _evaluate_rep(args, seq, seg).as_dict()
        report["rep"] = rep
        report["seed"] = seed
        rows.append(report)

    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(row[c]) for c in columns))
    mean_row = {"rep": "mean", "seed": ""}
    for c in columns[2:]:
        mean_row[c] = float(np.mean([row[c] for row in rows]))
    lines.append(",".join(_format_cell(mean_row[c]) for c in columns))
    _write_out("\n".join(lines) + "\n", args.out)

    total = sum(timings)
    sys.stderr.write(
        f"timing: method={args.method} reps={args.reps} "
        f"mean_detect_seconds={total / args.reps:.6f} "
        f"total_detect_seconds={total:.6f}\n"
    )
    return 0


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=METHODS, default="apelt-fixed")
    p.add_argument("--cost", choices=tuple(_FAMILY_BY_FLAG), default=None,
                   help="cost family (default: gaussian; beta for the p-value protocol)")
    p.add_argument("--theta0", default=None,
                   help="normal-state parameter: a number, or 'alpha,beta' for the Beta cost")
    p.add_argument("--penalty-normal", type=float, default=None)
    p.add_argument("--penalty-epidemic", type=float, default=None)
    p.add_argument("--penalty", type=float, default=None,
                   help="per-segment penalty for the stateless methods")
    p.add_argument("--min-seg-len", type=int, default=None)
    p.add_argument("--sigma2", type=float, default=None,
                   help="shared variance for the gaussian-fixed cost (default: estimated)")
    p.add_argument("--variance-estimator", choices=("localreg", "mad"), default="localreg")
    p.add_argument("--window", type=int, default=10,
                   help="window for the plugin normal-mean estimate")


def _add_dgp_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--scenario", choices=("A", "B"), default="A")
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="episeg",
        description="Epidemic change-point detection via alternating pruned "
                    "dynamic programming.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="segment a CSV of values (one per line)")
    p.add_argument("input", help="CSV file with one numeric value per line")
    p.add_argument("--header", action="store_true", help="skip the first line")
    _add_model_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", help="generate one labelled sequence as CSV")
    _add_dgp_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="replicate a protocol and score a method")
    _add_dgp_flags(p)
    _add_model_flags(p)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--tol", type=int, default=10,
                   help="matching tolerance for change-point detection rates")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
