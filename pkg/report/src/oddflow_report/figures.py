"""Figure builders. Everything goes through matplotlib's Agg backend; each
function writes files and returns the list of paths it created."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .loader import load_snapshot, load_timeseries, require_columns

HEATMAP_FIELDS = ["rho", "omega", "zeta_eff"]


def plot_timeseries(csv_path: str | Path, out_dir: str | Path,
                    columns: list[str] | None = None,
                    fmt: str = "png") -> list[Path]:
    header, data = load_timeseries(csv_path)
    require_columns(header, ["t"] + (columns or []), csv_path)
    wanted = columns if columns else [c for c in header if c != "t"]
    t = data[:, header.index("t")]

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for col in wanted:
        y = data[:, header.index(col)]
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot(t, y, lw=1.2)
        ax.set_xlabel("t")
        ax.set_ylabel(col)
        if np.all(y > 0) and y.size and y.max() / max(y.min(), 1e-300) > 50:
            ax.set_yscale("log")
        fig.tight_layout()
        path = out_dir / f"ts_{col}.{fmt}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def plot_fields(snapshot_path: str | Path, out_dir: str | Path,
                fmt: str = "png") -> list[Path]:
    fields = load_snapshot(snapshot_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(snapshot_path).stem
    written = []
    for name in HEATMAP_FIELDS:
        if name not in fields:
            continue
        arr = fields[name]
        fig, ax = plt.subplots(figsize=(4.2, 3.6))
        vmax = float(np.max(np.abs(arr))) or 1.0
        if name == "rho":
            im = ax.imshow(arr, origin="lower", cmap="viridis")
        else:
            im = ax.imshow(arr, origin="lower", cmap="RdBu_r",
                           vmin=-vmax, vmax=vmax)
        ax.set_title(name)
        fig.colorbar(im, ax=ax, shrink=0.85)
        fig.tight_layout()
        path = out_dir / f"{stem}_{name}.{fmt}"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def plot_lifespan(sweep_csv: str | Path, out_dir: str | Path,
                  fmt: str = "png") -> list[Path]:
    header, data = load_timeseries(sweep_csv)
    require_columns(header, ["epsilon", "T_double", "T_bound"], sweep_csv)
    eps = data[:, header.index("epsilon")]
    t_double = data[:, header.index("T_double")]
    t_bound = data[:, header.index("T_bound")]

    order = np.argsort(eps)
    eps, t_double, t_bound = eps[order], t_double[order], t_bound[order]
    measured = np.isfinite(t_double)

    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    ax.plot(eps[measured], t_double[measured], "o-", label="doubling time")
    ax.plot(eps, t_bound, "s--", label="theoretical lower bound")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.invert_xaxis()  # lifespan grows as the variation shrinks
    ax.set_xlabel(r"density variation $\epsilon$")
    ax.set_ylabel("time")
    ax.legend(fontsize=8)
    fig.tight_layout()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"lifespan_scaling.{fmt}"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]


def plot_distance(csv_a: str | Path, csv_b: str | Path, out_dir: str | Path,
                  fmt: str = "png") -> list[Path]:
    """L2-style distance between two runs' time series, column by column.

    Compares whichever monitored columns the two files share, on the common
    time range (interpolating the second run onto the first run's samples).
    """
    h_a, d_a = load_timeseries(csv_a)
    h_b, d_b = load_timeseries(csv_b)
    require_columns(h_a, ["t"], csv_a)
    require_columns(h_b, ["t"], csv_b)
    shared = [c for c in h_a if c != "t" and c in h_b]
    t_a = d_a[:, h_a.index("t")]
    t_b = d_b[:, h_b.index("t")]
    t_hi = min(t_a.max(), t_b.max())
    sel = t_a <= t_hi + 1e-12

    fig, ax = plt.subplots(figsize=(5, 3.2))
    for col in shared:
        ya = d_a[sel, h_a.index(col)]
        yb = np.interp(t_a[sel], t_b, d_b[:, h_b.index(col)])
        diff = np.abs(ya - yb)
        if np.max(diff) > 0:
            ax.semilogy(t_a[sel], np.maximum(diff, 1e-300), lw=1, label=col)
    ax.set_xlabel("t")
    ax.set_ylabel("|A - B|")
    if shared:
        ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"run_distance.{fmt}"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]
