"""Static figures from persisted run directories.

Two figures cover the standard reporting needs: team coverage against time
(with a min/max band when the directory holds a batch) and the robot
trajectories over the grid with the zone outline.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .config import from_dict
from .persist import AGGREGATE_FILE, MANIFEST_FILE, METRICS_FILE, TEAM_FILE


def _read_csv(path: Path) -> tuple[list[str], list[list[float]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


def plot_coverage(run_dir, out_path=None) -> Path:
    """Coverage-vs-time figure; uses the batch aggregate when present."""
    run_dir = Path(run_dir)
    out_path = Path(out_path) if out_path else run_dir / "coverage_vs_time.png"
    fig, ax = plt.subplots(figsize=(7, 4.5))
    agg = run_dir / AGGREGATE_FILE
    if agg.exists():
        _, rows = _read_csv(agg)
        t = [r[0] for r in rows]
        ax.fill_between(t, [r[2] for r in rows], [r[3] for r in rows], alpha=0.25, label="min/max")
        ax.plot(t, [r[1] for r in rows], label="mean")
    else:
        _, rows = _read_csv(run_dir / TEAM_FILE)
        ax.plot([r[0] for r in rows], [r[2] for r in rows], label="team")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("unknown area reduced [%]")
    ax.set_ylim(0, 105)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return out_path


def plot_trajectories(run_dir, out_path=None) -> Path:
    """Per-robot x/y paths with the grid and zone outline."""
    run_dir = Path(run_dir)
    out_path = Path(out_path) if out_path else run_dir / "trajectories.png"
    manifest = json.loads((run_dir / MANIFEST_FILE).read_text())
    config = from_dict(manifest["config"])
    metrics_path = run_dir / METRICS_FILE
    if not metrics_path.exists():
        first = sorted(run_dir.glob("trial_*/" + METRICS_FILE))
        if not first:
            raise FileNotFoundError(f"no {METRICS_FILE} under {run_dir}")
        metrics_path = first[0]
    header, rows = _read_csv(metrics_path)
    robot_col = header.index("robot")
    x_col, y_col = header.index("x"), header.index("y")

    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    g = config.grid
    ox, oy = g.origin
    for i in range(g.width_cells + 1):
        ax.axvline(ox + i * g.cell_size, color="0.85", lw=0.5, zorder=0)
    for j in range(g.height_cells + 1):
        ax.axhline(oy + j * g.cell_size, color="0.85", lw=0.5, zorder=0)
    zone_xy = list(config.zone.vertices) + [config.zone.vertices[0]]
    ax.plot([v[0] for v in zone_xy], [v[1] for v in zone_xy], "k-", lw=1.5, label="zone")
    for t in config.targets:
        cx, cy = g.cell_center(t.cell)
        ax.plot(cx, cy, "r*", ms=14, zorder=5)
    for rid in sorted({int(r[robot_col]) for r in rows}):
        xs = [r[x_col] for r in rows if int(r[robot_col]) == rid]
        ys = [r[y_col] for r in rows if int(r[robot_col]) == rid]
        ax.plot(xs, ys, lw=0.8, label=f"robot {rid}")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return out_path
