"""oddflow-report: render figures from run directories produced by oddflow.

A run directory is consumed purely through its files: `timeseries.csv`,
`sweep.csv`, and any `*.oddf` snapshots found at the top level.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures
from .loader import SchemaError, SnapshotError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddflow-report",
        description="Render figures from oddflow run directories.",
    )
    parser.add_argument("--runs", nargs="+", required=True, metavar="DIR",
                        help="one or more run directories to summarize")
    parser.add_argument("--out", required=True, metavar="DIR",
                        help="directory to write figures into")
    parser.add_argument("--format", choices=["png", "svg"], default="png")
    return parser


def report_run(run_dir: Path, out_dir: Path, fmt: str) -> list[Path]:
    written: list[Path] = []
    ts = run_dir / "timeseries.csv"
    if ts.is_file():
        written += figures.plot_timeseries(ts, out_dir, fmt=fmt)
    for sweep_name in ("lifespan_sweep.csv", "sweep.csv"):
        sweep = run_dir / sweep_name
        if sweep.is_file():
            written += figures.plot_lifespan(sweep, out_dir, fmt=fmt)
            break
    for snap in sorted(run_dir.glob("*.oddf")):
        written += figures.plot_fields(snap, out_dir, fmt=fmt)
    if not written:
        raise SchemaError(
            f"{run_dir}: no timeseries.csv, lifespan_sweep.csv, or *.oddf "
            "files found")
    return written


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    run_dirs = [Path(d) for d in args.runs]
    for run_dir in run_dirs:
        if not run_dir.is_dir():
            print(f"error: {run_dir} is not a directory", file=sys.stderr)
            return 2

    failed = False
    all_written: list[Path] = []
    for run_dir in run_dirs:
        sub = out_root / run_dir.name if len(run_dirs) > 1 else out_root
        try:
            paths = report_run(run_dir, sub, args.format)
        except (SchemaError, SnapshotError, OSError, ValueError) as exc:
            print(f"error: {run_dir}: {exc}", file=sys.stderr)
            failed = True
            continue
        all_written += paths

    # Cross-run distance plot when exactly two runs carry time series.
    if len(run_dirs) == 2:
        csvs = [d / "timeseries.csv" for d in run_dirs]
        if all(c.is_file() for c in csvs):
            try:
                all_written += figures.plot_distance(
                    csvs[0], csvs[1], out_root, fmt=args.format)
            except (SchemaError, ValueError) as exc:
                print(f"error: distance plot: {exc}", file=sys.stderr)
                failed = True

    for path in all_written:
        print(path)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
