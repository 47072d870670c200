"""Command-line front end.

Subcommands: `test` runs the event-information test (or the GC-VAR baseline)
on CSV inputs, `simulate` writes synthetic pairs, `bench` runs sweep suites
and renders their panels, `calibrate` measures null rejection rates of the
two-sample tests.

Exit codes: 0 = command completed (the statistical decision lives in the
report, not the exit code), 2 = usage or input error, 1 = internal failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io as series_io
from .bench import (
    METHODS as BENCH_METHODS,
    SweepConfig,
    emit_report,
    panel_name,
    preset_sweeps,
    run_sweep,
)
from .errors import EitestError, InvalidMaxLagError
from .granger import gc_var_test
from .procedure import eitest
from .series import validate_pair
from .simulate import MODELS, make_pair
from .twosample import KernelSpec, ks_test, mmd_gamma_pvalue, mmd_permutation_pvalue

THREADS_ENV = "EITEST_THREADS"

CALIBRATION_ALPHAS = (0.01, 0.05, 0.10)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _inner_method(args) -> str:
    if args.method == "eitest-ks":
        return "ks"
    return "mmd-permutation" if args.null == "permutation" else "mmd-gamma"


def cmd_test(args) -> int:
    if args.max_lag < 1:
        raise InvalidMaxLagError(f"--max-lag must be >= 1, got {args.max_lag}")
    series = series_io.read_time_series(args.series)
    events = series_io.read_event_series(args.events)
    pair = validate_pair(series, events)

    if args.method == "gcvar":
        result = gc_var_test(pair.series, pair.events, args.max_lag)
        payload = result.to_dict()
        print("granger-causality baseline (gc-var)")
        print(f"  lag order:        {result.lag}")
        print(f"  F statistic:      {result.f_statistic:.6g}")
        print(f"  p-value:          {result.p_value:.6g}")
        print(f"  dof:              ({result.dof_num}, {result.dof_den})")
        if result.degenerate:
            print("  note:             degenerate design; F forced to 0")
        print(f"  decision:         {'reject' if result.p_value < args.alpha else 'no rejection'}"
              f" at alpha={args.alpha:g}")
    else:
        kernel = KernelSpec(bandwidth=args.bandwidth)
        report = eitest(
            pair,
            args.max_lag,
            method=_inner_method(args),
            alpha=args.alpha,
            min_gap=args.min_gap,
            min_samples=args.min_samples,
            kernel=kernel,
            permutations=args.perms,
            seed=args.seed,
        )
        payload = report.to_dict()
        print("event-information test")
        print(f"  method:           {report.method}")
        print(f"  max lag:          {report.max_lag}")
        print(f"  tests performed:  {report.tests_performed}"
              f"   skipped pairs: {len(report.skipped_pairs)}")
        print(f"  adjusted p-value: {report.adjusted_p_value:.6g}")
        print(f"  decision:         {'reject' if report.reject else 'no rejection'}"
              f" at alpha={report.alpha:g}")
        strongest = sorted(report.pair_tests, key=lambda t: t.p_value)[:5]
        print("  smallest pair p-values (lag i vs lag j):")
        for t in strongest:
            print(f"    ({t.i:>2}, {t.j:>2})  statistic={t.statistic:.6g}"
                  f"  p={t.p_value:.6g}")
    if args.json:
        series_io.write_json(payload, args.json)
        print(f"wrote {args.json}")
    return 0


def cmd_simulate(args) -> int:
    rng = np.random.default_rng(args.seed)
    x, e = make_pair(
        args.model,
        args.length,
        args.events,
        not args.uncoupled,
        rng,
        order=args.order,
        snr=args.snr,
        delay=args.delay,
        increase=args.increase,
        dof=args.dof,
    )
    series_io.write_time_series(x, args.out_series)
    series_io.write_event_series(e, args.out_events)
    meta_path = args.out_meta or str(Path(args.out_series).with_suffix(".meta.json"))
    meta = {
        "model": args.model,
        "length": args.length,
        "events": args.events,
        "coupled": not args.uncoupled,
        "seed": args.seed,
        "parameters": {
            "order": args.order,
            "snr": args.snr,
            "delay": args.delay,
            "increase": args.increase,
            "dof": args.dof,
        },
    }
    series_io.write_json(meta, meta_path)
    print(f"wrote {args.out_series}, {args.out_events}, {meta_path}")
    return 0


def _bench_configs(args) -> tuple[SweepConfig, ...]:
    if args.preset:
        sweeps = preset_sweeps(args.preset)
    else:
        with open(args.config, encoding="utf-8") as handle:
            data = json.load(handle)
        panels = data if isinstance(data, list) else [data]
        sweeps = tuple(SweepConfig.from_dict(panel) for panel in panels)
    adjusted = []
    for cfg in sweeps:
        if args.trials is not None:
            cfg = replace(cfg, trials=args.trials)
        if args.methods is not None:
            cfg = replace(cfg, methods=tuple(args.methods.split(",")))
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        adjusted.append(cfg)
    return tuple(adjusted)


def cmd_bench(args) -> int:
    configs = _bench_configs(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for cfg in configs:
        report = run_sweep(cfg, workers=args.threads)
        stem = out_dir / panel_name(cfg)
        csv_path = stem.with_suffix(".csv")
        csv_path.write_text(emit_report(report, "csv"), encoding="utf-8")
        written = [str(csv_path)]
        json_path = stem.with_suffix(".json")
        json_path.write_text(emit_report(report, "json"), encoding="utf-8")
        written.append(str(json_path))
        if not args.no_figures:
            from .figures import render_panel

            png_path = stem.with_suffix(".png")
            render_panel(report, str(png_path))
            written.append(str(png_path))
        print(f"panel {panel_name(cfg)}: wrote {', '.join(written)}")
    return 0


def cmd_calibrate(args) -> int:
    if args.trials < 1:
        raise EitestError(f"--trials must be >= 1, got {args.trials}")
    if args.n < 2:
        raise EitestError(f"--n must be >= 2, got {args.n}")
    rng = np.random.default_rng(args.seed)
    m = args.m if args.m is not None else args.n
    p_values = np.empty(args.trials)
    for t in range(args.trials):
        a = rng.standard_normal(args.n)
        b = rng.standard_normal(m)
        if args.test == "ks":
            p_values[t] = ks_test(a, b).p_value
        elif args.test == "mmd-gamma":
            p_values[t] = mmd_gamma_pvalue(a, b, rng=rng).p_value
        else:
            p_values[t] = mmd_permutation_pvalue(
                a, b, permutations=args.perms, rng=rng
            ).p_value
    rows = []
    print(f"null calibration: {args.test}, n={args.n}, m={m}, {args.trials} trials")
    print("  alpha   rejection rate   binomial se")
    for alpha in CALIBRATION_ALPHAS:
        rate = float(np.mean(p_values < alpha))
        se = float(np.sqrt(alpha * (1 - alpha) / args.trials))
        rows.append({"alpha": alpha, "rejection_rate": rate, "binomial_se": se})
        print(f"  {alpha:<7g} {rate:<16.4f} {se:.4f}")
    if args.json:
        payload = {
            "test": args.test,
            "n": args.n,
            "m": m,
            "trials": args.trials,
            "seed": args.seed,
            "rates": rows,
        }
        series_io.write_json(payload, args.json)
        print(f"wrote {args.json}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eitest",
        description="Shared-information tests between a time series and a binary event series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    test = sub.add_parser("test", help="run a test on CSV inputs")
    test.add_argument("--series", required=True, help="time series CSV (one observation per line)")
    test.add_argument("--events", required=True, help="event series CSV (one 0/1 per line)")
    test.add_argument("--method", default="eitest-mmd",
                      choices=("eitest-ks", "eitest-mmd", "gcvar"))
    test.add_argument("--max-lag", type=int, default=32,
                      help="max lag K (doubles as the gc-var lag order)")
    test.add_argument("--alpha", type=float, default=0.05)
    test.add_argument("--min-gap", type=int, default=0)
    test.add_argument("--min-samples", type=int, default=5,
                      help="smallest usable lag-sample size")
    test.add_argument("--null", default="gamma", choices=("gamma", "permutation"),
                      help="null approximation for eitest-mmd")
    test.add_argument("--perms", type=int, default=999)
    test.add_argument("--bandwidth", type=float, default=None,
                      help="RBF bandwidth (default: median heuristic)")
    test.add_argument("--seed", type=int, default=None)
    test.add_argument("--json", default=None, help="also write the report as JSON")
    test.set_defaults(func=cmd_test)

    sim = sub.add_parser("simulate", help="generate a synthetic pair")
    sim.add_argument("--model", required=True, choices=MODELS)
    sim.add_argument("--length", type=int, default=8192)
    sim.add_argument("--events", type=int, default=128)
    sim.add_argument("--uncoupled", action="store_true",
                     help="permute the events after simulating the series")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--order", type=int, default=8)
    sim.add_argument("--snr", type=float, default=10.0)
    sim.add_argument("--delay", type=int, default=1)
    sim.add_argument("--increase", type=float, default=4.0)
    sim.add_argument("--dof", type=float, default=3.0)
    sim.add_argument("--out-series", required=True)
    sim.add_argument("--out-events", required=True)
    sim.add_argument("--out-meta", default=None,
                     help="sidecar JSON path (default: out-series with .meta.json)")
    sim.set_defaults(func=cmd_simulate)

    bench = sub.add_parser("bench", help="run benchmark sweeps")
    source = bench.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=("fig2-desk", "fig2-full"))
    source.add_argument("--config", help="sweep config JSON (one panel or a list)")
    bench.add_argument("--out-dir", required=True)
    bench.add_argument("--trials", type=int, default=None, help="override trials per point")
    bench.add_argument("--methods", default=None,
                       help=f"comma-separated subset of {','.join(BENCH_METHODS)}")
    bench.add_argument("--seed", type=int, default=None, help="override root seed")
    bench.add_argument("--threads", type=int, default=_default_threads(),
                       help=f"worker processes (default ${THREADS_ENV} or 1)")
    bench.add_argument("--no-figures", action="store_true",
                       help="skip rendering PNG panels")
    bench.set_defaults(func=cmd_bench)

    cal = sub.add_parser("calibrate", help="null rejection rates of a two-sample test")
    cal.add_argument("--test", default="ks", choices=("ks", "mmd-gamma", "mmd-permutation"))
    cal.add_argument("--n", type=int, default=200)
    cal.add_argument("--m", type=int, default=None, help="second sample size (default: n)")
    cal.add_argument("--trials", type=int, default=2000)
    cal.add_argument("--perms", type=int, default=199)
    cal.add_argument("--seed", type=int, default=0)
    cal.add_argument("--json", default=None, help="write the rate table as JSON")
    cal.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (EitestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())
