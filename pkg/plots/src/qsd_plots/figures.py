"""Line-chart rendering for sweep output directories.

Consumes only the CSV schemas written by the training CLI: per-scale
series files (``episode,value``) and the sweep-level ``normalized.csv``
(``scale,norm_total,norm_min,norm_count``). Charts plot the CSV values
exactly; an optional moving-average window is available for a smoothed
look and is clearly labeled when active. Rendering is deterministic:
fixed style, no timestamps, so identical inputs give identical bytes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams["svg.hashsalt"] = "qsd-plots"

SERIES_FILES = ("reward.csv", "success.csv", "avg_distance.csv")
AXIS_TITLES = {
    "reward.csv": ("Episode", "Average reward"),
    "success.csv": ("Episode", "Success rate (%)"),
    "avg_distance.csv": ("Episode", "Average distance per iteration"),
}


class PlotInputError(ValueError):
    """Missing or malformed chart input; message names the file (and row)."""


@dataclass
class FigureSpec:
    csv_paths: list[Path]
    labels: list[str]
    x_title: str
    y_title: str
    output: Path
    window: int | None = None
    title: str = ""
    x_column: str = "episode"
    field_names: tuple[str, ...] = field(default=("episode", "value"))


def read_two_column_csv(path: Path, columns: tuple[str, str]) -> tuple[np.ndarray, np.ndarray]:
    if not path.exists():
        raise PlotInputError(f"missing input file: {path}")
    xs, ys = [], []
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows or rows[0] != list(columns):
        raise PlotInputError(
            f"{path}: expected header {','.join(columns)}"
        )
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise PlotInputError(f"{path}: row {i} has {len(row)} fields, expected 2")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError as err:
            raise PlotInputError(f"{path}: row {i}: {err}") from err
    if not xs:
        raise PlotInputError(f"{path}: no data rows")
    return np.array(xs), np.array(ys)


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return values
    kernel = np.ones(window) / window
    return np.convolve(values, kernel, mode="valid")


def plot_series(spec: FigureSpec) -> Path:
    """Render one line chart from the spec's CSV inputs."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for path, label in zip(spec.csv_paths, spec.labels):
            xs, ys = read_two_column_csv(path, spec.field_names[:2])
            if spec.window and spec.window > 1:
                ys = moving_average(ys, spec.window)
                xs = xs[: len(ys)]
                label = f"{label} (avg over {spec.window})"
            ax.plot(xs, ys, label=label, linewidth=1.2)
        ax.set_xlabel(spec.x_title)
        ax.set_ylabel(spec.y_title)
        if spec.title:
            ax.set_title(spec.title)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        _save(fig, spec.output)
    finally:
        plt.close(fig)
    return spec.output


def _save(fig, output: Path) -> None:
    output.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {"dpi": 110}
    if output.suffix == ".svg":
        kwargs["metadata"] = {"Date": None}
    fig.savefig(output, **kwargs)


def _scale_dirs(sweep_dir: Path) -> list[tuple[float, Path]]:
    found = []
    for child in sweep_dir.iterdir():
        if child.is_dir() and child.name.startswith("scale_"):
            found.append((float(child.name.removeprefix("scale_")), child))
    return sorted(found)


def plot_normalized(sweep_dir: Path, output: Path) -> Path:
    """Three-curve comparison across scale factors; the dip marks the pick."""
    path = sweep_dir / "normalized.csv"
    if not path.exists():
        raise PlotInputError(f"missing input file: {path}")
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    header = ["scale", "norm_total", "norm_min", "norm_count"]
    if not rows or rows[0] != header:
        raise PlotInputError(f"{path}: expected header {','.join(header)}")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    if data.size == 0:
        raise PlotInputError(f"{path}: no data rows")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        labels = ("Total distance", "Minimum distance", "Below-average episode count")
        colors = ("black", "tab:blue", "tab:red")
        for column, label, color in zip((1, 2, 3), labels, colors):
            ax.plot(data[:, 0], data[:, column], label=label, color=color,
                    marker="o", markersize=3, linewidth=1.2)
        ax.set_xlabel("Scale factor")
        ax.set_ylabel("Normalized value")
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        _save(fig, output)
    finally:
        plt.close(fig)
    return output


def plot_all(sweep_dir: str | Path, window: int | None = None,
             image_format: str = "png") -> list[Path]:
    """Render the four figures for a completed sweep directory."""
    sweep_dir = Path(sweep_dir)
    scale_dirs = _scale_dirs(sweep_dir)
    missing = []
    if not scale_dirs:
        missing.append(str(sweep_dir / "scale_*"))
    for _, d in scale_dirs:
        missing += [str(d / f) for f in SERIES_FILES if not (d / f).exists()]
    if not (sweep_dir / "normalized.csv").exists():
        missing.append(str(sweep_dir / "normalized.csv"))
    if missing:
        raise PlotInputError("incomplete sweep directory, missing: " + ", ".join(missing))

    outputs = []
    for series in SERIES_FILES:
        x_title, y_title = AXIS_TITLES[series]
        spec = FigureSpec(
            csv_paths=[d / series for _, d in scale_dirs],
            labels=[f"s = {s:g}" for s, _ in scale_dirs],
            x_title=x_title,
            y_title=y_title,
            output=sweep_dir / (series.removesuffix(".csv") + f".{image_format}"),
            window=window,
        )
        outputs.append(plot_series(spec))
    outputs.append(
        plot_normalized(sweep_dir, sweep_dir / f"normalized.{image_format}")
    )
    return outputs
