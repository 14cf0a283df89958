"""Command-line driver: `oddflow run|verify|lifespan|lp-check`.

Exit codes: 0 all pass, 1 runtime or assertion failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, config_hash, config_text, load_config,
                     scenario_spec, solver_config)
from .diagnostics import (CSV_COLUMNS, DiagnosticsCollector, doubling_time,
                          lifespan_lower_bound)
from .dynamics import BlowupSuspectedError, SolverConfig, run
from .grid import Grid
from .littlewood_paley import make_cutoffs
from .pressure import EllipticSolveError
from .scenarios import build_initial_state
from .snapshots import write_snapshot, write_timeseries
from .state import State
from .verify import run_all, run_lp_suite


def _snapshot_fields(state: State) -> dict[str, np.ndarray]:
    g = state.grid
    return {
        "rho": state.rho,
        "u1": state.u[0],
        "u2": state.u[1],
        "w1": state.w_eff[0],
        "w2": state.w_eff[1],
        "omega": g.curl(state.u),
        "zeta_eff": g.curl(state.w_eff),
    }


def _write_manifest(out_dir: Path, parser, outcome: str, started: float,
                    outputs: list[str], finished: float | None = None) -> None:
    manifest = {
        "config_hash": config_hash(parser),
        "code_version": __version__,
        "start_time": started,
        "end_time": finished,
        "outcome": outcome,
        "outputs": outputs,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _simulate(parser, out_dir: Path, seed: int | None) -> tuple[str, DiagnosticsCollector]:
    cfg = solver_config(parser)
    spec = scenario_spec(parser, seed=seed)
    grid = Grid(cfg.n, cfg.L)
    cut = make_cutoffs(grid)
    initial = build_initial_state(grid, spec, cfg.nu0)

    sample_every = parser.getint("time", "sample_every", fallback=1)
    collector = DiagnosticsCollector(grid, cut, pressure_rtol=cfg.pressure_rtol)

    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = ["timeseries.csv", "snapshot_initial.oddf", "snapshot_final.oddf"]
    started = time.time()
    _write_manifest(out_dir, parser, "running", started, outputs)
    write_snapshot(out_dir / "snapshot_initial.oddf", _snapshot_fields(initial))

    outcome = "completed"
    final = initial
    try:
        final = run(cfg, initial, monitor=lambda st, _res: collector.sample(st),
                    sample_every=sample_every)
    except BlowupSuspectedError as exc:
        outcome = "blowup_suspected"
        final = exc.state
    except EllipticSolveError:
        outcome = "elliptic_failure"

    write_timeseries(out_dir / "timeseries.csv", CSV_COLUMNS,
                     [r.as_row() for r in collector.records])
    write_snapshot(out_dir / "snapshot_final.oddf", _snapshot_fields(final))
    _write_manifest(out_dir, parser, outcome, started, outputs, time.time())
    return outcome, collector


def cmd_run(args) -> int:
    parser = load_config(args.config, args.set or [])
    out_dir = Path(args.out)
    outcome, _ = _simulate(parser, out_dir, args.seed)
    print(f"outcome: {outcome}  (outputs in {out_dir})")
    return 0 if outcome == "completed" else 1


def cmd_verify(args) -> int:
    parser = load_config(args.config, args.set or [])
    n = parser.getint("grid", "n")
    results = run_all(n)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failed += 1
        print(f"{r.name:<{width}}  {r.value:12.3e}  <= {r.tolerance:8.1e}  {status}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _lifespan_one(config_items: list[str], epsilon: float) -> dict:
    parser = load_config(None, config_items)
    cfg = solver_config(parser)
    spec = scenario_spec(parser)
    spec.epsilon = epsilon

    grid = Grid(cfg.n, cfg.L)
    cut = make_cutoffs(grid)
    initial = build_initial_state(grid, spec, cfg.nu0)
    t_bound = lifespan_lower_bound(cut, grid.curl(initial.u), initial.rho,
                                   K=parser.getfloat("sweep", "K", fallback=1.0))

    sample_every = parser.getint("time", "sample_every", fallback=2)
    row = {"epsilon": epsilon, "T_bound": t_bound}
    for formulation in ("elsasser", "original"):
        cfg_f = solver_config(parser)
        cfg_f.formulation = formulation
        collector = DiagnosticsCollector(grid, cut, pressure_rtol=cfg.pressure_rtol)

        def sample_until_doubled(st, _res):
            rec = collector.sample(st)
            # stop a little past the doubling so interpolation brackets it
            return bool(rec.E_lower >= 2.2 * collector.records[0].E_lower)

        try:
            run(cfg_f, initial.copy(), monitor=sample_until_doubled,
                sample_every=sample_every)
        except (BlowupSuspectedError, EllipticSolveError):
            pass
        times = [r.t for r in collector.records]
        values = [r.E_lower for r in collector.records]
        td = doubling_time(times, values)
        key = "T_double" if formulation == "elsasser" else "T_double_original"
        row[key] = td if td is not None else float("nan")
        row[f"censored_{formulation}"] = td is None
    return row


def cmd_lifespan(args) -> int:
    parser = load_config(args.sweep_file, args.set or [])
    if not parser.has_section("sweep"):
        parser.add_section("sweep")
    eps_text = parser.get("sweep", "epsilons", fallback="0.4,0.2,0.1,0.05")
    epsilons = [float(v) for v in eps_text.split(",")]

    # flatten the parsed config so worker processes rebuild it deterministically
    items = [f"{s}.{k}={parser[s][k]}" for s in parser.sections() for k in parser[s]]
    rows = []
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_lifespan_one, [items] * len(epsilons), epsilons))
    else:
        rows = [_lifespan_one(items, eps) for eps in epsilons]

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    columns = ["epsilon", "T_double", "T_bound", "T_double_original", "censored"]
    csv_rows = [[r["epsilon"], r["T_double"], r["T_bound"],
                 r["T_double_original"], float(r["censored_elsasser"])] for r in rows]
    write_timeseries(out_dir / "lifespan_sweep.csv", columns, csv_rows)

    # verdict: T_double nondecreasing as epsilon decreases, one inversion allowed
    ordered = sorted(rows, key=lambda r: -r["epsilon"])
    inversions = 0
    for a, b in zip(ordered, ordered[1:]):
        ta, tb = a["T_double"], b["T_double"]
        if np.isnan(tb) or (not np.isnan(ta) and tb > ta):
            continue
        inversions += 1
    bound_monotone = all(
        a["T_bound"] <= b["T_bound"] for a, b in zip(ordered, ordered[1:]))
    verdict = "PASS" if inversions <= 1 and bound_monotone else "FAIL"

    for r in ordered:
        print(f"epsilon={r['epsilon']:.3f}  T_double={r['T_double']:.4f}  "
              f"T_bound={r['T_bound']:.4e}  censored={r['censored_elsasser']}")
    print(f"monotonicity verdict: {verdict} ({inversions} inversion(s))")
    return 0 if verdict == "PASS" else 1


def cmd_lp_check(args) -> int:
    results = run_lp_suite(args.n)
    print("check,value,tolerance,status")
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failed += 1
        print(f"{r.name},{r.value!r},{r.tolerance!r},{status}")
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oddflow")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one configuration")
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p_run.add_argument("--out", default="out")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_ver = sub.add_parser("verify", help="run the invariant suite")
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p_ver.set_defaults(func=cmd_verify)

    p_life = sub.add_parser("lifespan", help="epsilon sweep of doubling times")
    p_life.add_argument("--config", "--sweep-file", dest="sweep_file", default=None)
    p_life.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p_life.add_argument("--out", default="out")
    p_life.add_argument("--jobs", type=int, default=1)
    p_life.set_defaults(func=cmd_lifespan)

    p_lp = sub.add_parser("lp-check", help="dyadic-decomposition calibration report")
    p_lp.add_argument("--n", type=int, default=64)
    p_lp.add_argument("--L", type=float, default=2.0 * np.pi)
    p_lp.set_defaults(func=cmd_lp_check)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
