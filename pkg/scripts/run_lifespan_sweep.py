#!/usr/bin/env python3
"""Doubling-time sweep over the density-variation amplitude.

Thin wrapper over `oddflow lifespan` with the calibrated defaults: n=96,
nu0=0.3, Taylor-Green base flow, rho0 = 1 + eps cos x (the bump must cut
across the cell streamlines or nothing ever doubles)."""

import argparse
import sys

from oddflow.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/lifespan")
    ap.add_argument("--n", type=int, default=96)
    ap.add_argument("--nu0", type=float, default=0.3)
    ap.add_argument("--epsilons", default="0.4,0.2,0.1,0.05")
    ap.add_argument("--t-end", type=float, default=4.0)
    args = ap.parse_args()

    return cli_main([
        "lifespan", "--out", args.out,
        "--set", f"grid.n={args.n}",
        "--set", f"physics.nu0={args.nu0}",
        "--set", "physics.pressure_rtol=1e-8",
        "--set", "scenario.bump_mode=1,0",
        "--set", f"time.t_end={args.t_end}",
        "--set", "time.sample_every=20",
        "--set", f"sweep.epsilons={args.epsilons}",
    ])


if __name__ == "__main__":
    sys.exit(main())
