"""Command line interface.

Subcommands: ``run`` (full pipeline), ``sweep`` (rating-vs-ambient CSV),
``validate`` (check input files), ``calibrate`` (NLR calibration factors).
Exit codes: 0 success, 1 input error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .dispatch import Infeasible, MaxIterations
from .scenario import (GapError, ParseError, SchemaError, UnknownParameter,
                       builtin_path, load_benchmark, load_csv, load_scenario,
                       run, sweep)

log = logging.getLogger("dlrsim")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2


def _add_run_flags(p):
    p.add_argument("--config", required=True, help="scenario YAML file")
    p.add_argument("--rating-mode", choices=["nlr", "dlr"],
                   help="override the scenario rating mode")
    p.add_argument("--res-scale", type=float, help="override the RES scale factor")
    p.add_argument("--disp-scale", type=float,
                   help="override the dispatchable capacity scale factor")
    p.add_argument("--horizon", type=int, help="override the horizon step count")
    p.add_argument("--out", help="override the output directory")


def _scenario_from_args(args):
    config = load_scenario(args.config)
    overrides = {}
    if args.rating_mode:
        overrides["rating_mode"] = args.rating_mode.upper()
    if args.res_scale is not None:
        overrides["res_scale"] = args.res_scale
    if args.disp_scale is not None:
        overrides["disp_scale"] = args.disp_scale
    if args.horizon is not None:
        overrides["horizon_steps"] = args.horizon
    if args.out is not None:
        overrides["output_dir"] = args.out
    return dataclasses.replace(config, **overrides) if overrides else config


def cmd_run(args):
    config = _scenario_from_args(args)
    result, report, prepared = run(config)
    print(f"run complete: {result.disp.shape[0]} steps, "
          f"mode {config.rating_mode}, outputs in {config.output_dir}")
    for zone, entry in report.items():
        print(f"  {zone:6s} shed {entry['load_shed_pct']:.3f}%  "
              f"wind curtailed {entry['wind_curtailed_pct']:.3f}%  "
              f"pv curtailed {entry['pv_curtailed_pct']:.3f}%")
    return EXIT_OK


def cmd_sweep(args):
    benchmark = load_benchmark(args.benchmark)
    frame = sweep(benchmark.conductor, args.parameter, benchmark.sweep_ambient)
    out = Path(args.out or f"sweep_{args.parameter}.csv")
    frame.to_csv(out, index=False)
    print(f"wrote {out}; end-to-end change "
          f"{frame.attrs['end_to_end_change_pct']:+.1f}%")
    return EXIT_OK


def cmd_validate(args):
    config = load_scenario(args.config)
    benchmark = load_benchmark(config.benchmark_path)
    zones = benchmark.zone_ids
    for key in ("wind", "pv", "load"):
        table = load_csv(config.data_paths[key], zones)
        print(f"  {key}: {len(table.index)} steps ok")
    for key in ("tmin", "tmax"):
        table = load_csv(config.data_paths[key], zones, step_seconds=86400.0)
        print(f"  {key}: {len(table.index)} days ok")
    print("validation passed")
    return EXIT_OK


def cmd_calibrate(args):
    from .grid import calibrate_to_nlr, corridor_rating_single
    benchmark = load_benchmark(args.benchmark)
    factors = calibrate_to_nlr(benchmark.grid, benchmark.conductor,
                               benchmark.reference_ambient)
    print("line     factor   NLR (MVA)")
    for line in benchmark.grid.lines:
        print(f"{line.key:8s} {factors[line.key]:6.3f}   {line.nlr_mva:8.1f}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dlrsim",
        description="Dynamic line rating dispatch simulator",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the full dispatch pipeline")
    _add_run_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="rating sweep over one ambient parameter")
    p_sweep.add_argument("parameter",
                         choices=["wind_speed", "wind_angle", "air_temp", "solar"])
    p_sweep.add_argument("--benchmark", help="benchmark YAML (default: shipped)")
    p_sweep.add_argument("--out", help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="validate scenario input files")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    p_cal = sub.add_parser("calibrate", help="show NLR calibration factors")
    p_cal.add_argument("--benchmark", help="benchmark YAML (default: shipped)")
    p_cal.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (SchemaError, GapError, ParseError, UnknownParameter,
            FileNotFoundError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (Infeasible, MaxIterations) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
