#!/usr/bin/env python3
"""
simulate: run a spacing sweep, a UAV-count sweep or a single scheme run.

Output files (floats with 9 significant digits):
  spacing  spacing_sweep.csv  altitude,spacing,seed,psi_ghz,omega_ghz,p_succ,utility,status
           spacing_psi.csv / spacing_psucc.csv  altitude,spacing,mean,std,seeds
  uavs     uav_sweep.csv      scheme,num_uavs,seed,psi_ghz,omega_ghz,p_succ,utility,status,error
           timings.csv        scheme,num_uavs,seed,elapsed_s
           uavs_<distribution>_{psucc,psi,utility}.csv  scheme,num_uavs,mean,std,seeds
  single   single_run.json    scheme, M, seed, initial and final deployment with both reports
           single_report.csv  stage,psi_ghz,omega_ghz,p_succ,utility

Exit codes: 0 success, 2 configuration error, 3 at least one failed cell.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from orchestration.plot_data import emit_plot_data
from orchestration.sweeps import (
    run_single,
    run_spacing_sweep,
    run_uav_count_sweep,
    save_single_dump,
    write_table,
)
from schemas.config import load_config, parse_seed_list
from schemas.deployment import EvaluationReport
from utils.errors import Ca3dError, ConfigError
from utils.logger import Ca3dLogger

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_FAILED_CELL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simulate", description="UAV gateway deployment experiments")
    parser.add_argument("--config", required=True, type=Path, help="experiment TOML file")
    parser.add_argument("--sweep", required=True, choices=["spacing", "uavs", "single"])
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--seeds", type=str, default=None, help="comma-separated seed list overriding the config")
    parser.add_argument("--scheme", nargs="+", default=None, help="schemes overriding the config")
    parser.add_argument("--uavs", type=int, default=None, help="UAV count for --sweep single")
    parser.add_argument("--parallel", action="store_true", help="run sweep cells concurrently")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger = Ca3dLogger().get_logger()

    try:
        config = load_config(args.config)
        seeds = parse_seed_list(args.seeds) if args.seeds else None
        config = config.with_overrides(seeds=seeds, schemes=args.scheme)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"simulate --sweep {args.sweep} with config '{config.name}' -> {out_dir}")

    try:
        if args.sweep == "spacing":
            table = run_spacing_sweep(config)
            write_table(table, out_dir / "spacing_sweep.csv")
            emit_plot_data(table, "spacing", out_dir)
            return EXIT_OK

        if args.sweep == "uavs":
            tables = run_uav_count_sweep(config, parallel=args.parallel)
            write_table(tables.results, out_dir / "uav_sweep.csv")
            write_table(tables.timings, out_dir / "timings.csv")
            emit_plot_data(tables.results, "uavs", out_dir, label=config.scenario.distribution)
            if tables.failed_cells:
                print(f"{tables.failed_cells} cells failed; see uav_sweep.csv", file=sys.stderr)
                return EXIT_FAILED_CELL
            return EXIT_OK

        dump = run_single(config, num_uavs=args.uavs)
        save_single_dump(dump, out_dir / "single_run.json")
        rows = [
            {"stage": "initial", **dump.initial_report.to_row()},
            {"stage": "final", **dump.report.to_row()},
        ]
        write_table(pd.DataFrame(rows, columns=["stage", *EvaluationReport.CSV_COLUMNS]), out_dir / "single_report.csv")
        return EXIT_OK

    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Ca3dError as e:
        logger.error(f"simulate --sweep {args.sweep} failed: {e}")
        print(f"run failed: {e}", file=sys.stderr)
        return EXIT_FAILED_CELL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
