"""Command-line entry point: ``klmat {presets,generate-mg,run,bounds}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import PRESETS, emit_csv, format_config, get_preset, load_config, run_experiment, bounds_report
from .errors import KlmatError
from .signals import MgParams, mackey_glass


def _config(ref: str):
    """A config file path, or the name of a built-in preset."""
    path = Path(ref)
    if path.is_file():
        return load_config(path)
    if ref in PRESETS:
        return get_preset(ref)
    raise KlmatError(f"{ref!r} is neither a config file nor a preset ({', '.join(PRESETS)})")


def cmd_presets(args):
    if args.show:
        sys.stdout.write(format_config(get_preset(args.show)))
        return 0
    for name, (desc, cfg) in PRESETS.items():
        algos = ", ".join(a.kind for a in cfg.algorithms)
        print(f"{name:6s}  {desc}  [{algos}]")
    return 0


def cmd_generate_mg(args):
    params = MgParams(tau=args.tau, dt=args.dt, sample_period=args.sample_period,
                      history_value=args.history, warmup=args.warmup)
    series = mackey_glass(params, args.n)
    rows = ["index,value"] + [f"{i},{v:.17g}" for i, v in enumerate(series.values)]
    text = "\n".join(rows) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def cmd_run(args):
    cfg = _config(args.config).with_overrides(seed=args.seed, scale=args.scale)
    result = run_experiment(cfg)
    out = Path(args.out) if args.out else Path("results") / cfg.name
    files = emit_csv(result, out)
    print(f"{cfg.name}: {cfg.n_replicas} replicas x {cfg.n_train} steps in {result.duration:.2f} s")
    for kind, res in result.algorithms.items():
        curve = res.curve.values_db
        status = f"diverged at step {res.curve.diverged_at}" if res.curve.diverged_at else "ok"
        final = curve[-min(50, len(curve)):].mean() if len(curve) else float("nan")
        print(f"  {kind:10s} first {curve[0] if len(curve) else float('nan'):8.2f} dB  "
              f"last-50 mean {final:8.2f} dB  centers {res.final_sizes[0]:5d}  {status}")
    print(f"wrote {len(files)} files to {out}")
    return 0


def cmd_bounds(args):
    cfg = _config(args.config).with_overrides(seed=args.seed, scale=args.scale)
    for row in bounds_report(cfg):
        line = f"{row['algorithm']:10s} lambda_max {row['lambda_max']:.6g}  sigma_e {row['sigma_e']:.6g}"
        if "mu_bound" in row:
            verdict = "ok" if row["mu_ok"] else "EXCEEDS BOUND"
            line += f"  mu {row['mu']:g} < {row['mu_bound']:.6g} ({verdict})"
        if "l_bound" in row:
            verdict = "ok" if row["l_ok"] else "BELOW BOUND"
            line += f"  l {row['l']:g} > {row['l_bound']:.6g} ({verdict})"
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="klmat", description="Kernel adaptive filtering benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("presets", help="list built-in experiment configurations")
    p.add_argument("--show", metavar="NAME", help="print the full config of one preset")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("generate-mg", help="write a Mackey-Glass series as index,value CSV")
    p.add_argument("-n", type=int, default=2000, help="number of samples (default 2000)")
    p.add_argument("--tau", type=float, default=30.0)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--sample-period", type=float, default=6.0)
    p.add_argument("--history", type=float, default=1.2, help="constant initial history")
    p.add_argument("--warmup", type=int, default=100)
    p.add_argument("-o", "--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_generate_mg)

    for name, func, helptext in (
        ("run", cmd_run, "run an experiment and write learning curves"),
        ("bounds", cmd_bounds, "print step-size and l stability bounds"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="config file or preset name")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--scale", type=float, help="multiply n_train, n_test and n_replicas")
        if name == "run":
            p.add_argument("-o", "--out", help="output directory (default results/<name>)")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (KlmatError, OSError) as exc:
        print(f"klmat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
