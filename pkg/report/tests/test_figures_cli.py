"""End-to-end checks: figures render from files with the producer's schemas,
and the CLI walks run directories and reports schema problems."""

import numpy as np
import pytest

from oddflow.snapshots import write_snapshot

from oddflow_report.cli import main

TS_HEADER = ("t,kinetic_energy,rho_min,rho_max,u_L2,grad_u_inf,hess_rho_inf,"
             "div_u_inf,div_w_inf,compat_inf,E_s,E_lower,H_upper,A_t,"
             "grad_pi0_L2,grad_pi0_inf,vorticity_residual")


def write_run(run_dir, seed=0, n_rows=6):
    run_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    cols = TS_HEADER.split(",")
    lines = [TS_HEADER]
    for i in range(n_rows):
        row = [i * 0.1] + list(1.0 + 0.01 * rng.standard_normal(len(cols) - 1))
        lines.append(",".join(f"{v:.17g}" for v in row))
    (run_dir / "timeseries.csv").write_text("\n".join(lines) + "\n")
    fields = {name: rng.standard_normal((16, 16))
              for name in ["rho", "u1", "u2", "omega", "zeta_eff"]}
    write_snapshot(run_dir / "snapshot_final.oddf", fields)


def write_sweep(run_dir):
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "lifespan_sweep.csv").write_text(
        "epsilon,T_double,T_bound,T_double_original,censored\n"
        "0.4,1.8,0.62,1.8,0\n0.2,2.4,1.25,2.4,0\n"
        "0.1,3.1,2.5,3.1,0\n0.05,nan,5.0,nan,1\n")


def test_single_run_renders(tmp_path):
    run = tmp_path / "runA"
    write_run(run)
    out = tmp_path / "figs"
    assert main(["--runs", str(run), "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert "ts_kinetic_energy.png" in names
    assert "snapshot_final_rho.png" in names
    assert "snapshot_final_zeta_eff.png" in names


def test_sweep_figure_svg(tmp_path):
    run = tmp_path / "sweep_run"
    write_sweep(run)
    out = tmp_path / "figs"
    assert main(["--runs", str(run), "--out", str(out),
                 "--format", "svg"]) == 0
    assert (out / "lifespan_scaling.svg").is_file()


def test_two_runs_distance(tmp_path):
    run_a = tmp_path / "a"
    run_b = tmp_path / "b"
    write_run(run_a, seed=1)
    write_run(run_b, seed=2)
    out = tmp_path / "figs"
    assert main(["--runs", str(run_a), str(run_b), "--out", str(out)]) == 0
    assert (out / "run_distance.png").is_file()
    assert (out / "a" / "ts_kinetic_energy.png").is_file()
    assert (out / "b" / "ts_kinetic_energy.png").is_file()


def test_missing_directory_is_usage_error(tmp_path):
    assert main(["--runs", str(tmp_path / "nope"),
                 "--out", str(tmp_path / "o")]) == 2


def test_empty_run_fails(tmp_path):
    run = tmp_path / "empty"
    run.mkdir()
    assert main(["--runs", str(run), "--out", str(tmp_path / "o")]) == 1


def test_schema_error_names_missing_columns(tmp_path, capsys):
    run = tmp_path / "bad"
    run.mkdir()
    (run / "lifespan_sweep.csv").write_text("epsilon,T_double\n0.4,1.8\n")
    assert main(["--runs", str(run), "--out", str(tmp_path / "o")]) == 1
    assert "T_bound" in capsys.readouterr().err


def test_corrupt_snapshot_fails_cleanly(tmp_path, capsys):
    run = tmp_path / "corrupt"
    run.mkdir()
    (run / "snapshot_final.oddf").write_bytes(b"JUNKJUNKJUNK")
    assert main(["--runs", str(run), "--out", str(tmp_path / "o")]) == 1
    assert "magic" in capsys.readouterr().err
