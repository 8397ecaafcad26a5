"""Batch command line: run / sweep / plot / validate.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 bad data.
Errors print one `error:<category>: message` line to stderr. The output
directory may be overridden with the SWARMLINK_OUT environment variable.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from .config import ConfigError, PRESETS, ScenarioConfig
from .engine import run_scenario, run_sweep
from .io import (
    EmitError,
    emit_plots,
    emit_summary,
    emit_sweep_summary,
    emit_timeseries,
    parse_scenario,
    parse_timeseries,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DATA = 4


def _out_dir(args) -> Path:
    return Path(os.environ.get("SWARMLINK_OUT", args.out))


def _load_config(args) -> tuple[ScenarioConfig, str]:
    if args.scenario:
        cfg = parse_scenario(args.scenario)
        scenario_id = Path(args.scenario).stem
    else:
        cfg = PRESETS[args.preset]()
        scenario_id = args.preset
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "steps", None) is not None:
        overrides["total_steps"] = args.steps
    if overrides:
        from .config import validate_config

        cfg = validate_config(dataclasses.replace(cfg, **overrides))
    return cfg, scenario_id


def cmd_run(args) -> int:
    cfg, scenario_id = _load_config(args)
    out = _out_dir(args)
    records, summary = run_scenario(cfg)
    base = f"{scenario_id}_seed{cfg.seed}"
    emit_timeseries(records, out / f"{base}.csv")
    emit_summary(summary, out / f"{base}_summary.json", scenario_id, cfg.seed)
    if args.plots:
        emit_plots(records, out, stem=base)
    print(f"wrote {out / base}.csv ({len(records)} steps)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg, scenario_id = _load_config(args)
    out = _out_dir(args)
    seeds = list(range(args.seed_start, args.seed_start + args.seeds))
    result = run_sweep(cfg, seeds, workers=args.workers, keep_records=True)
    for seed, records in zip(result.seeds, result.records):
        emit_timeseries(records, out / f"{scenario_id}_seed{seed}.csv")
    emit_sweep_summary(result, out / f"{scenario_id}_sweep_summary.json", scenario_id)
    print(
        f"swept {len(seeds)} seeds; best seed {result.best_seed} "
        f"at fraction {result.best_frac_count_one:.4f} fully connected"
    )
    return EXIT_OK


def cmd_plot(args) -> int:
    records = parse_timeseries(args.csv)
    out = _out_dir(args)
    paths = emit_plots(records, out, stem=Path(args.csv).stem)
    print(f"wrote {len(paths)} plots to {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    parse_scenario(args.scenario)
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmlink")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_opts(p, with_seed=True):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--scenario", help="scenario JSON file")
        src.add_argument("--preset", choices=sorted(PRESETS), default="cb")
        if with_seed:
            p.add_argument("--seed", type=int, default=None)
        p.add_argument("--steps", type=int, default=None, help="override total_steps")
        p.add_argument("--out", default="out", help="output directory")

    p_run = sub.add_parser("run", help="run one scenario and emit CSV + summary")
    add_scenario_opts(p_run)
    p_run.add_argument("--plots", action="store_true", help="also emit SVG plots")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scenario across a seed range")
    add_scenario_opts(p_sweep, with_seed=False)
    p_sweep.add_argument("--seeds", type=int, default=30, help="number of seeds")
    p_sweep.add_argument("--seed-start", type=int, default=0)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_plot = sub.add_parser("plot", help="render plots from an emitted CSV")
    p_plot.add_argument("--csv", required=True)
    p_plot.add_argument("--out", default="out")
    p_plot.set_defaults(func=cmd_plot)

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("--scenario", required=True)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error:config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmitError as exc:
        print(f"error:io: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error:data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
